#include "nascar/classifier.hpp"

#include <map>
#include <set>
#include <tuple>

namespace nascar {

std::string_view to_string(Label label) noexcept {
  return label == Label::Actionable ? "ACTIONABLE" : "NON_ACTIONABLE";
}

bool affected_by_diff(const Warning& w, const std::vector<FileDiff>& diffs) {
  for (const FileDiff& fd : diffs) {
    if (!fd.old_path || *fd.old_path != w.file_path) continue;
    if (fd.is_deleted()) return true;
    for (const Hunk& h : fd.hunks) {
      if (h.old_len > 0) {
        if (w.span.intersects(h.old_start, h.old_start + h.old_len - 1)) return true;
      } else if (w.span.start_line <= h.old_start + 1 && h.old_start <= w.span.end_line) {
        return true;
      }
    }
  }
  return false;
}

namespace {

// Line ranges of the child file that the pair changed.
std::vector<std::pair<int, int>> changed_regions(const FileDiff& fd) {
  std::vector<std::pair<int, int>> regions;
  for (const Hunk& h : fd.hunks) {
    if (h.new_len > 0) regions.emplace_back(h.new_start, h.new_start + h.new_len - 1);
    else regions.emplace_back(h.new_start, h.new_start + 1);
  }
  return regions;
}

}  // namespace

PairClassification classify_pair(const Report& parent_report, const Report& child_report,
                                 const std::vector<FileDiff>& diffs, const CommitPair& pair) {
  std::map<std::string_view, std::vector<std::pair<int, int>>> regions_by_file;
  for (const FileDiff& fd : diffs) {
    if (fd.new_path) {
      auto& r = regions_by_file[*fd.new_path];
      const auto add = changed_regions(fd);
      r.insert(r.end(), add.begin(), add.end());
    }
  }

  std::set<WarningKey> child_keys;
  std::set<WarningKey> child_keys_in_changes;
  for (const Warning& w : child_report.warnings) {
    WarningKey key = WarningKey::of(w);
    const auto it = regions_by_file.find(w.file_path);
    if (it != regions_by_file.end()) {
      for (const auto& [first, last] : it->second) {
        if (w.span.intersects(first, last)) {
          child_keys_in_changes.insert(key);
          break;
        }
      }
    }
    child_keys.insert(std::move(key));
  }

  std::set<WarningKey> actionable_keys;
  std::vector<const Warning*> actionable, non_actionable;
  for (const Warning& w : parent_report.warnings) {
    const WarningKey key = WarningKey::of(w);
    if (affected_by_diff(w, diffs) && !child_keys_in_changes.contains(key)) {
      actionable.push_back(&w);
      actionable_keys.insert(key);
    }
    if (child_keys.contains(key)) non_actionable.push_back(&w);
  }

  PairClassification out;
  const auto make = [&](const Warning& w, Label label) {
    return ClassifiedWarning{w, label, pair, pair.parent.sha};
  };
  for (const Warning* w : actionable) out.actionable.push_back(make(*w, Label::Actionable));
  for (const Warning* w : non_actionable) {
    if (!actionable_keys.contains(WarningKey::of(*w))) out.non_actionable.push_back(make(*w, Label::NonActionable));
  }
  return out;
}

std::vector<ClassifiedWarning> dedupe_na_keep_last(std::vector<ClassifiedWarning> stream) {
  std::map<WarningKey, std::size_t> latest;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const ClassifiedWarning& cw = stream[i];
    if (cw.label != Label::NonActionable) continue;
    auto [it, inserted] = latest.try_emplace(cw.key(), i);
    const CommitPair& best = stream[it->second].pair;
    if (!inserted && std::tie(best.child.commit_date_utc, best.chain_index) <=
                         std::tie(cw.pair.child.commit_date_utc, cw.pair.chain_index)) {
      it->second = i;
    }
  }
  std::vector<bool> keep(stream.size(), false);
  for (std::size_t i = 0; i < stream.size(); ++i) keep[i] = stream[i].label == Label::Actionable;
  for (const auto& [key, index] : latest) keep[index] = true;

  std::vector<ClassifiedWarning> out;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (keep[i]) out.push_back(std::move(stream[i]));
  }
  return out;
}

}  // namespace nascar
