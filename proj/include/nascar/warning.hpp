#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nascar {

enum class Tool { Pmd, SpotBugs, Builtin };

/// Dataset spelling: "PMD", "SpotBugs", "Builtin".
std::string_view to_string(Tool tool) noexcept;
/// Accepts the dataset spelling or the lowercase CLI spelling.
std::optional<Tool> parse_tool(std::string_view s) noexcept;

/// 1-based line span with optional 1-based columns.
struct Span {
  int start_line = 1;
  int end_line = 1;
  std::optional<int> start_col;
  std::optional<int> end_col;

  bool valid() const noexcept {
    return start_line >= 1 && end_line >= start_line && (!start_col || *start_col >= 1) && (!end_col || *end_col >= 1);
  }
  bool intersects(int first, int last) const noexcept { return start_line <= last && first <= end_line; }

  friend auto operator<=>(const Span&, const Span&) = default;
};

struct Warning {
  Tool tool = Tool::Builtin;
  std::string rule_id;
  std::string category;
  std::string message;
  /// Repo-relative, `/`-separated.
  std::string file_path;
  Span span;

  friend auto operator<=>(const Warning&, const Warning&) = default;
};

struct Report {
  std::string commit_sha;
  std::vector<Warning> warnings;
  /// Findings dropped for lack of a usable source location.
  std::size_t skipped = 0;
};

}  // namespace nascar
