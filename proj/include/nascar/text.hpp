#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nascar {

/// Replaces every invalid UTF-8 sequence with U+FFFD. Valid input is returned unchanged.
std::string to_valid_utf8(std::string_view bytes);

/// Splits on '\n'. A trailing newline does not start an extra line and a
/// trailing '\r' is removed from each line, so "a\r\nb\n" yields {"a", "b"}.
std::vector<std::string_view> split_lines(std::string_view text);

std::string_view trim(std::string_view s);

bool ends_with_java(std::string_view path);

/// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

/// Lowercase hex, exactly 40 characters.
bool is_sha1_hex(std::string_view s);

}  // namespace nascar
