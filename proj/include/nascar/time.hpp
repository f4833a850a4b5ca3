#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace nascar {

using Timestamp = std::chrono::sys_seconds;

/// `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601_utc(Timestamp t);

/// Inverse of format_iso8601_utc; only the exact `Z`-suffixed form is accepted.
std::optional<Timestamp> parse_iso8601_utc(std::string_view s);

/// `YYYY-MM-DD`, interpreted as midnight UTC.
std::optional<Timestamp> parse_date(std::string_view s);

}  // namespace nascar
