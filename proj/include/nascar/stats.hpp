#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nascar/dataset.hpp"
#include "nascar/rules.hpp"

namespace nascar {

struct CategoryRow {
  std::string category;
  std::size_t actionable = 0;
  double actionable_pct = 0.0;
  std::size_t non_actionable = 0;
  double non_actionable_pct = 0.0;
};

/// Per-category counts of one tool's records, sorted by category name.
/// Percentages are shares of the per-label totals with two decimals, rounded
/// by largest remainder so each column sums to exactly 100.00 (or is all zero).
/// PMD "Documentation" and SpotBugs "NOISE" never appear. Rules missing from
/// the universe are grouped under "(unknown)".
std::vector<CategoryRow> category_distribution(const std::vector<LabeledRecord>& records, const RuleUniverse& universe);
std::vector<CategoryRow> category_distribution(const std::vector<LabeledRecord>& records, Tool tool);

enum class CoverageClass { Both, OnlyA, OnlyNA, Neither };
std::string_view to_string(CoverageClass c) noexcept;  // "BOTH", "ONLY_A", "ONLY_NA", "NEITHER"

struct CoverageCounts {
  std::size_t both = 0;
  std::size_t only_a = 0;
  std::size_t only_na = 0;
  std::size_t neither = 0;
  /// Class of every rule in the universe.
  std::map<std::string, CoverageClass> by_rule;
  /// Rules seen in records but absent from the universe, with record counts.
  std::map<std::string, std::size_t> unknown_rules;

  std::size_t total() const noexcept { return both + only_a + only_na + neither; }
};

/// Classifies every rule of `universe` by the labels of the records of that
/// tool; records of other tools are ignored.
CoverageCounts rule_coverage_classes(const std::vector<LabeledRecord>& records, const RuleUniverse& universe);

struct ProjectRow {
  std::string repo;
  /// Indexed by Tool; [0] non-actionable, [1] actionable.
  std::array<std::array<std::size_t, 2>, 3> counts{};

  std::size_t count(Tool tool, bool actionable) const { return counts[static_cast<std::size_t>(tool)][actionable]; }
  std::size_t total() const;
};

struct ProjectStats {
  std::vector<ProjectRow> rows;  // sorted by repo
  ProjectRow totals;             // repo = "Sum"
};

ProjectStats project_stats(const std::vector<LabeledRecord>& records);

struct SampleSpec {
  std::int64_t population = 1;
  double z = 1.645;
  double p_hat = 0.5;
  double epsilon = 0.1;
};

/// n0 = z^2 p(1-p) / eps^2, n = ceil(n0 / (1 + (n0 - 1) / N)), at most N.
/// Throws ConfigError when N < 1, eps <= 0 or p outside [0, 1].
std::int64_t cochran_sample_size(const SampleSpec& spec);

/// Two-sided normal critical value for a confidence level, rounded to three
/// decimals (0.90 -> 1.645, 0.95 -> 1.96).
double z_for_confidence(double confidence);

/// n records drawn uniformly without replacement; a fixed seed gives the same
/// sample on every platform. Throws Error when n exceeds the record count.
std::vector<LabeledRecord> draw_validation_sample(const std::vector<LabeledRecord>& records, std::size_t n,
                                                  std::uint64_t seed);

/// Sample export for manual review, one JSON object per line.
std::string sample_to_jsonl(const std::vector<LabeledRecord>& sample);

std::string category_csv(const std::vector<CategoryRow>& rows);
std::string category_table(const std::vector<CategoryRow>& rows);
/// Grouped bar chart of the two percentage columns.
std::string category_svg(const std::vector<CategoryRow>& rows, std::string_view title);

std::string coverage_csv(const CoverageCounts& c, std::size_t universe_size);
std::string coverage_table(const CoverageCounts& c, std::size_t universe_size);
std::string coverage_svg(const CoverageCounts& c, std::size_t universe_size, std::string_view title);

std::string projects_csv(const ProjectStats& s);
std::string projects_table(const ProjectStats& s);
std::string projects_svg(const ProjectStats& s, std::string_view title);

/// RFC 4180 quoting when needed.
std::string csv_field(std::string_view s);

}  // namespace nascar
