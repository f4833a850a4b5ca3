#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nascar {

/// One `@@ -old_start,old_len +new_start,new_len @@` block of a zero-context diff.
/// For a pure insertion old_start is the line *after which* text is inserted
/// (0 for the top of the file); for a pure deletion new_start plays that role.
struct Hunk {
  int old_start = 0;
  int old_len = 0;
  int new_start = 0;
  int new_len = 0;

  bool is_insertion() const noexcept { return old_len == 0; }
  bool is_deletion() const noexcept { return new_len == 0; }

  friend bool operator==(const Hunk&, const Hunk&) = default;
};

/// Changes to one file between two commits. An absent old_path is an added
/// file, an absent new_path a deleted one.
struct FileDiff {
  std::optional<std::string> old_path;
  std::optional<std::string> new_path;
  std::vector<Hunk> hunks;

  bool is_added() const noexcept { return !old_path; }
  bool is_deleted() const noexcept { return !new_path; }

  friend bool operator==(const FileDiff&, const FileDiff&) = default;
};

/// Parses `git diff` output (any context size, renames disabled). Files whose
/// diff carries no hunks (mode-only or binary changes) are kept only when they
/// are additions or deletions.
std::vector<FileDiff> parse_unified_diff(std::string_view text);

/// Keeps only diffs whose old or new path ends in `.java`.
std::vector<FileDiff> filter_java(std::vector<FileDiff> diffs);

}  // namespace nascar
