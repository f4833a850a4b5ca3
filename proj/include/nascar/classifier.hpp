#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "nascar/diff.hpp"
#include "nascar/repo.hpp"
#include "nascar/warning.hpp"

namespace nascar {

/// Line-insensitive identity of a warning across commits.
struct WarningKey {
  Tool tool = Tool::Builtin;
  std::string rule_id;
  std::string message;
  std::string file_path;

  static WarningKey of(const Warning& w) { return {w.tool, w.rule_id, w.message, w.file_path}; }
  friend auto operator<=>(const WarningKey&, const WarningKey&) = default;
};

enum class Label { Actionable, NonActionable };

std::string_view to_string(Label label) noexcept;  // "ACTIONABLE" / "NON_ACTIONABLE"

struct ClassifiedWarning {
  Warning warning;
  Label label = Label::NonActionable;
  CommitPair pair;
  /// The parent commit, where the warning was reported.
  std::string observed_at_sha;

  WarningKey key() const { return WarningKey::of(warning); }
};

/// True when a change of the pair touches the warning's context in the parent:
/// a deleted/modified old range intersecting the span, an insertion point p
/// with start_line <= p + 1 and p <= end_line, or deletion of the whole file.
bool affected_by_diff(const Warning& w, const std::vector<FileDiff>& diffs);

struct PairClassification {
  std::vector<ClassifiedWarning> actionable;
  std::vector<ClassifiedWarning> non_actionable;
};

/// Labels the parent report's warnings of one commit pair.
///
/// A parent warning is actionable when its context is affected by the diff and
/// no child warning with the same key lies in a changed region of the new file
/// (inserted lines, or the two lines around a deletion point). It is
/// non-actionable when its key still occurs anywhere in the child report.
/// Keys flagged both ways keep only their actionable warnings.
PairClassification classify_pair(const Report& parent_report, const Report& child_report,
                                 const std::vector<FileDiff>& diffs, const CommitPair& pair);

/// Collapses non-actionable warnings to one per key: the occurrence from the
/// pair with the latest child commit date, ties going to the later chain
/// index and then the later stream position. Actionable warnings pass through. Survivors keep their stream order.
std::vector<ClassifiedWarning> dedupe_na_keep_last(std::vector<ClassifiedWarning> stream);

}  // namespace nascar
