#include <algorithm>
#include <tuple>

#include "nascar/analyzer.hpp"
#include "nascar/text.hpp"

namespace nascar {

namespace {

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '$';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f'; }

// Maps byte offsets of a text to 1-based (line, column).
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) {
    starts_.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '\n') starts_.push_back(i + 1);
    }
  }
  std::pair<int, int> locate(std::size_t offset) const {
    const auto it = std::upper_bound(starts_.begin(), starts_.end(), offset) - 1;
    return {static_cast<int>(it - starts_.begin()) + 1, static_cast<int>(offset - *it) + 1};
  }

 private:
  std::vector<std::size_t> starts_;
};

// Index one past the parenthesis matching text[open], or npos.
std::size_t match_paren(std::string_view text, std::size_t open, bool single_line) {
  int depth = 0;
  for (std::size_t i = open; i < text.size(); ++i) {
    if (single_line && text[i] == '\n') return std::string_view::npos;
    if (text[i] == '(') ++depth;
    else if (text[i] == ')' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

std::size_t skip_space(std::string_view text, std::size_t i) {
  while (i < text.size() && is_space(text[i])) ++i;
  return i;
}

std::string collapse_space(std::string_view s) {
  std::string out;
  bool pending = false;
  for (const char c : trim(s)) {
    if (is_space(c)) {
      pending = true;
      continue;
    }
    if (pending && !out.empty()) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

void long_lines(const std::string& path, std::string_view text, std::vector<Warning>& out) {
  int line_no = 0;
  for (const std::string_view line : split_lines(text)) {
    ++line_no;
    if (utf8_length(line) > kMaxLineLength) {
      out.push_back(Warning{Tool::Builtin, "LongLine", "Code Style", "Line is longer than 120 characters", path,
                            Span{line_no, line_no, std::nullopt, std::nullopt}});
    }
  }
}

void sysout_calls(const std::string& path, std::string_view text, const LineIndex& index, std::vector<Warning>& out) {
  constexpr std::string_view needle = "System.out.print";
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos; pos = text.find(needle, pos + 1)) {
    if (pos > 0 && (is_ident_char(text[pos - 1]) || text[pos - 1] == '.')) continue;
    std::size_t name_end = pos + std::string_view("System.out.").size();
    while (name_end < text.size() && is_ident_char(text[name_end])) ++name_end;
    const std::string_view method = text.substr(pos + 11, name_end - pos - 11);
    const std::size_t open = skip_space(text, name_end);
    if (open >= text.size() || text[open] != '(') continue;
    const std::size_t close = match_paren(text, open, true);
    std::string args;
    std::size_t last = 0;
    if (close == std::string_view::npos) {
      const std::size_t eol = std::min(text.find('\n', open), text.size());
      args = collapse_space(text.substr(open + 1, eol - open - 1));
      last = eol - 1;
    } else {
      args = collapse_space(text.substr(open + 1, close - open - 2));
      last = close - 1;
    }
    if (args.size() > 60) args = args.substr(0, 57) + "...";
    const auto [line, col] = index.locate(pos);
    const auto [end_line, end_col] = index.locate(last);
    out.push_back(Warning{Tool::Builtin, "SysOut", "Best Practices",
                          "System.out." + std::string(method) + "(" + args + ") should be replaced by a logger call",
                          path, Span{line, end_line, col, end_col}});
  }
}

// Type part of a catch parameter: "final IOException | RuntimeException e" -> "IOException | RuntimeException".
std::string caught_type(std::string_view param) {
  std::string p = collapse_space(param);
  const auto sp = p.rfind(' ');
  if (sp != std::string::npos) p.erase(sp);
  if (p.starts_with("final ")) p.erase(0, 6);
  return p.empty() ? std::string("?") : p;
}

void empty_catches(const std::string& path, std::string_view text, const LineIndex& index, std::vector<Warning>& out) {
  constexpr std::string_view kw = "catch";
  for (std::size_t pos = text.find(kw); pos != std::string_view::npos; pos = text.find(kw, pos + 1)) {
    if (pos > 0 && is_ident_char(text[pos - 1])) continue;
    if (pos + kw.size() < text.size() && is_ident_char(text[pos + kw.size()])) continue;
    const std::size_t open = skip_space(text, pos + kw.size());
    if (open >= text.size() || text[open] != '(') continue;
    const std::size_t close = match_paren(text, open, false);
    if (close == std::string_view::npos) continue;
    const std::size_t brace = skip_space(text, close);
    if (brace >= text.size() || text[brace] != '{') continue;
    const std::size_t end_brace = skip_space(text, brace + 1);
    if (end_brace >= text.size() || text[end_brace] != '}') continue;
    const auto [line, col] = index.locate(pos);
    const auto [end_line, end_col] = index.locate(end_brace);
    out.push_back(Warning{Tool::Builtin, "EmptyCatch", "Error Prone",
                          "Empty catch block swallows " + caught_type(text.substr(open + 1, close - open - 2)), path,
                          Span{line, end_line, col, end_col}});
  }
}

}  // namespace

Report builtin_analyze(const std::map<std::string, std::string>& files, std::string commit_sha) {
  Report report;
  report.commit_sha = std::move(commit_sha);
  for (const auto& [path, text] : files) {
    if (!ends_with_java(path)) continue;
    std::vector<Warning> found;
    const LineIndex index(text);
    long_lines(path, text, found);
    sysout_calls(path, text, index, found);
    empty_catches(path, text, index, found);
    std::sort(found.begin(), found.end(), [](const Warning& a, const Warning& b) {
      return std::tie(a.span.start_line, a.rule_id, a.span) < std::tie(b.span.start_line, b.rule_id, b.span);
    });
    report.warnings.insert(report.warnings.end(), std::make_move_iterator(found.begin()),
                           std::make_move_iterator(found.end()));
  }
  return report;
}

}  // namespace nascar
