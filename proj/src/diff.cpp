#include "nascar/diff.hpp"

#include <charconv>

#include "nascar/errors.hpp"
#include "nascar/text.hpp"

namespace nascar {

namespace {

// Undoes git's C-style path quoting ("a\tb" with octal escapes for bytes).
std::string unquote_path(std::string_view s) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') return std::string(s);
  s = s.substr(1, s.size() - 2);
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    const char c = s[++i];
    switch (c) {
      case 'a': out += '\a'; break;
      case 'b': out += '\b'; break;
      case 'f': out += '\f'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case 't': out += '\t'; break;
      case 'v': out += '\v'; break;
      default:
        if (c >= '0' && c <= '7') {
          int v = 0;
          std::size_t k = 0;
          for (; k < 3 && i + k < s.size() && s[i + k] >= '0' && s[i + k] <= '7'; ++k) v = v * 8 + (s[i + k] - '0');
          out += static_cast<char>(v);
          i += k - 1;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// "a/path" -> "path"; "/dev/null" -> nullopt.
std::optional<std::string> strip_prefix(std::string_view raw) {
  if (!raw.empty() && raw.back() == '\t') raw.remove_suffix(1);
  std::string path = unquote_path(raw);
  if (path == "/dev/null") return std::nullopt;
  if (path.size() >= 2 && (path.starts_with("a/") || path.starts_with("b/"))) path.erase(0, 2);
  return path;
}

int parse_number(std::string_view s, std::string_view line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw Error("malformed hunk header: " + std::string(line));
  return v;
}

// "12,3" or "12" (length defaults to 1).
std::pair<int, int> parse_range(std::string_view s, std::string_view line) {
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) return {parse_number(s, line), 1};
  return {parse_number(s.substr(0, comma), line), parse_number(s.substr(comma + 1), line)};
}

Hunk parse_hunk_header(std::string_view line) {
  // @@ -a,b +c,d @@ ...
  if (!line.starts_with("@@ -")) throw Error("malformed hunk header: " + std::string(line));
  const auto plus = line.find(" +", 4);
  const auto close = line.find(" @@", plus == std::string_view::npos ? 4 : plus);
  if (plus == std::string_view::npos || close == std::string_view::npos) {
    throw Error("malformed hunk header: " + std::string(line));
  }
  const auto [os, ol] = parse_range(line.substr(4, plus - 4), line);
  const auto [ns, nl] = parse_range(line.substr(plus + 2, close - plus - 2), line);
  return Hunk{os, ol, ns, nl};
}

// Paths from "diff --git a/X b/Y", used when no ---/+++ lines follow.
std::pair<std::string, std::string> paths_from_git_header(std::string_view rest) {
  if (rest.starts_with('"')) {
    const auto end = rest.find("\" ", 1);
    if (end != std::string_view::npos) {
      return {strip_prefix(rest.substr(0, end + 1)).value_or(""), strip_prefix(rest.substr(end + 2)).value_or("")};
    }
  }
  // Unquoted "a/P b/P": both halves are equal when renames are disabled.
  if (rest.size() >= 5 && (rest.size() - 5) % 2 == 0) {
    const std::size_t n = (rest.size() - 5) / 2;
    const auto a = rest.substr(2, n);
    const auto b = rest.substr(n + 5);
    if (a == b) return {std::string(a), std::string(b)};
  }
  const auto sp = rest.find(" b/");
  if (sp == std::string_view::npos) return {std::string(rest), std::string(rest)};
  return {strip_prefix(rest.substr(0, sp)).value_or(""), strip_prefix(rest.substr(sp + 1)).value_or("")};
}

struct Pending {
  FileDiff diff;
  std::string header_old, header_new;
  bool added = false, deleted = false, saw_paths = false;
};

void flush(std::optional<Pending>& p, std::vector<FileDiff>& out) {
  if (!p) return;
  if (!p->saw_paths) {
    p->diff.old_path = p->added ? std::nullopt : std::optional(p->header_old);
    p->diff.new_path = p->deleted ? std::nullopt : std::optional(p->header_new);
  }
  if (!p->diff.hunks.empty() || p->diff.is_added() || p->diff.is_deleted()) out.push_back(std::move(p->diff));
  p.reset();
}

}  // namespace

std::vector<FileDiff> parse_unified_diff(std::string_view text) {
  std::vector<FileDiff> out;
  std::optional<Pending> cur;
  int old_left = 0, new_left = 0;

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;

    if (old_left > 0 || new_left > 0) {
      if (line.starts_with('-') && old_left > 0) --old_left;
      else if (line.starts_with('+') && new_left > 0) --new_left;
      else if (line.starts_with(' ') && old_left > 0 && new_left > 0) --old_left, --new_left;
      else if (line.starts_with('\\')) {
      } else throw Error("truncated hunk body near: " + std::string(line));
      continue;
    }
    if (line.starts_with('\\')) continue;  // "\ No newline at end of file"

    if (line.starts_with("diff --git ")) {
      flush(cur, out);
      cur.emplace();
      auto [a, b] = paths_from_git_header(line.substr(11));
      cur->header_old = std::move(a);
      cur->header_new = std::move(b);
    } else if (!cur) {
      continue;
    } else if (line.starts_with("new file mode")) {
      cur->added = true;
    } else if (line.starts_with("deleted file mode")) {
      cur->deleted = true;
    } else if (line.starts_with("--- ")) {
      cur->diff.old_path = strip_prefix(line.substr(4));
      cur->saw_paths = true;
    } else if (line.starts_with("+++ ")) {
      cur->diff.new_path = strip_prefix(line.substr(4));
      cur->saw_paths = true;
    } else if (line.starts_with("@@ ")) {
      Hunk h = parse_hunk_header(line);
      old_left = h.old_len;
      new_left = h.new_len;
      cur->diff.hunks.push_back(h);
    }
  }
  flush(cur, out);
  return out;
}

std::vector<FileDiff> filter_java(std::vector<FileDiff> diffs) {
  std::erase_if(diffs, [](const FileDiff& d) {
    return !((d.old_path && ends_with_java(*d.old_path)) || (d.new_path && ends_with_java(*d.new_path)));
  });
  return diffs;
}

}  // namespace nascar
