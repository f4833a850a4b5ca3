#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "nascar/errors.hpp"
#include "nascar/stats.hpp"
#include "support/support.hpp"

using namespace nascar;
using namespace nascar::testing;

namespace {

LabeledRecord rec(Tool tool, const std::string& rule, std::int64_t label, const std::string& repo = "r1") {
  LabeledRecord r;
  r.tool = std::string(to_string(tool));
  r.warning_type = rule;
  r.repo = repo;
  r.label = label;
  return r;
}

RuleUniverse three_rules() {
  return parse_rule_manifest("# category: Alpha\nR1\nR2\n# category: Beta\nR3\n", Tool::Pmd);
}

// Independent oracle for the coverage partition.
std::map<CoverageClass, std::size_t> coverage_oracle(const std::vector<LabeledRecord>& rs, const RuleUniverse& u) {
  std::map<std::string, std::set<std::int64_t>> seen;
  for (const auto& r : rs) {
    if (r.tool == to_string(u.tool)) seen[r.warning_type].insert(r.label);
  }
  std::map<CoverageClass, std::size_t> out;
  for (const auto& rule : u.rule_ids) {
    const auto& l = seen[rule];
    const bool a = l.contains(1);
    const bool na = l.contains(0);
    ++out[a && na ? CoverageClass::Both : a ? CoverageClass::OnlyA : na ? CoverageClass::OnlyNA : CoverageClass::Neither];
  }
  return out;
}

// Unrounded corrected sample size.
long double cochran_oracle(long double n_pop, long double z, long double p, long double e) {
  const long double n0 = z * z * p * (1 - p) / (e * e);
  return n0 / (1 + (n0 - 1) / n_pop);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows(1, std::vector<std::string>(1));
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        rows.back().back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        rows.back().back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      rows.back().emplace_back();
    } else if (c == '\n') {
      rows.emplace_back(1);
    } else if (c != '\r') {
      rows.back().back() += c;
    }
  }
  if (rows.back().size() == 1 && rows.back()[0].empty()) rows.pop_back();
  return rows;
}

double pct_sum(const std::vector<CategoryRow>& rows, bool actionable) {
  double s = 0;
  for (const auto& r : rows) s += actionable ? r.actionable_pct : r.non_actionable_pct;
  return s;
}

}  // namespace

TEST(CategoryDistribution, HandCounts) {
  const auto u = three_rules();
  const std::vector<LabeledRecord> rs{rec(Tool::Pmd, "R1", 1), rec(Tool::Pmd, "R2", 1), rec(Tool::Pmd, "R3", 1),
                                      rec(Tool::Pmd, "R3", 0), rec(Tool::Pmd, "R3", 0), rec(Tool::Pmd, "Rx", 0),
                                      rec(Tool::SpotBugs, "R1", 1)};
  const auto rows = category_distribution(rs, u);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].category, "(unknown)");
  EXPECT_EQ(rows[0].non_actionable, 1u);
  EXPECT_EQ(rows[1].category, "Alpha");
  EXPECT_EQ(rows[1].actionable, 2u);
  EXPECT_DOUBLE_EQ(rows[1].actionable_pct, 66.67);
  EXPECT_EQ(rows[2].category, "Beta");
  EXPECT_EQ(rows[2].actionable, 1u);
  EXPECT_DOUBLE_EQ(rows[2].actionable_pct, 33.33);
  EXPECT_EQ(rows[2].non_actionable, 2u);
  EXPECT_DOUBLE_EQ(rows[2].non_actionable_pct, 66.67);
  EXPECT_DOUBLE_EQ(rows[0].non_actionable_pct, 33.33);
}

TEST(CategoryDistribution, EmptyDataset) {
  for (const auto& r : category_distribution({}, Tool::Pmd)) {
    EXPECT_EQ(r.actionable + r.non_actionable, 0u);
    EXPECT_EQ(r.actionable_pct, 0.0);
  }
}

TEST(CategoryDistribution, ExcludedCategoriesNeverAppear) {
  const auto rows = category_distribution(generate_records(2000, 8), Tool::Pmd);
  for (const auto& r : rows) EXPECT_NE(r.category, "Documentation");
  for (const auto& r : category_distribution(generate_records(2000, 8), Tool::SpotBugs)) EXPECT_NE(r.category, "NOISE");
}

TEST(CategoryDistribution, PercentagesSumToHundred) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    std::mt19937_64 rng(seed);
    const auto records = generate_records(1 + rng() % 700, seed);
    for (Tool t : {Tool::Pmd, Tool::SpotBugs}) {
      const auto rows = category_distribution(records, t);
      std::size_t a = 0;
      std::size_t na = 0;
      for (const auto& r : rows) {
        a += r.actionable;
        na += r.non_actionable;
      }
      EXPECT_NEAR(pct_sum(rows, true), a > 0 ? 100.0 : 0.0, 1e-9);
      EXPECT_NEAR(pct_sum(rows, false), na > 0 ? 100.0 : 0.0, 1e-9);
    }
  }
}

TEST(Coverage, ThreeRuleFixture) {
  const auto u = three_rules();
  const auto c = rule_coverage_classes({rec(Tool::Pmd, "R1", 1), rec(Tool::Pmd, "R1", 1), rec(Tool::Pmd, "R2", 0),
                                        rec(Tool::SpotBugs, "R3", 1)},
                                       u);
  EXPECT_EQ(c.both, 0u);
  EXPECT_EQ(c.only_a, 1u);
  EXPECT_EQ(c.only_na, 1u);
  EXPECT_EQ(c.neither, 1u);
  EXPECT_EQ(c.by_rule.at("R3"), CoverageClass::Neither);
  EXPECT_TRUE(c.unknown_rules.empty());
}

TEST(Coverage, EmptyDatasetIsAllNeither) {
  for (Tool t : {Tool::Pmd, Tool::SpotBugs}) {
    const auto& u = bundled_universe(t);
    const auto c = rule_coverage_classes({}, u);
    EXPECT_EQ(c.neither, u.size());
    EXPECT_EQ(c.total(), u.size());
  }
}

TEST(Coverage, UniverseSizes) {
  EXPECT_EQ(bundled_universe(Tool::Pmd).size(), 283u);
  EXPECT_EQ(bundled_universe(Tool::SpotBugs).size(), 490u);
}

TEST(Coverage, RandomizedPartitionMatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto records = generate_records(50 * seed, seed);
    records.push_back(rec(Tool::Pmd, "NotARule", 1));
    for (Tool t : {Tool::Pmd, Tool::SpotBugs}) {
      const auto& u = bundled_universe(t);
      const auto c = rule_coverage_classes(records, u);
      EXPECT_EQ(c.total(), u.size());
      EXPECT_EQ(c.by_rule.size(), u.size());
      auto o = coverage_oracle(records, u);
      EXPECT_EQ(c.both, o[CoverageClass::Both]);
      EXPECT_EQ(c.only_a, o[CoverageClass::OnlyA]);
      EXPECT_EQ(c.only_na, o[CoverageClass::OnlyNA]);
      EXPECT_EQ(c.neither, o[CoverageClass::Neither]);
    }
    EXPECT_EQ(rule_coverage_classes(records, bundled_universe(Tool::Pmd)).unknown_rules.at("NotARule"), 1u);
  }
}

TEST(ProjectStats, TotalsAcrossRepos) {
  const std::vector<LabeledRecord> rs{rec(Tool::Pmd, "a", 1, "r2"), rec(Tool::Pmd, "a", 0, "r1"),
                                      rec(Tool::SpotBugs, "b", 0, "r1"), rec(Tool::Builtin, "c", 1, "r1")};
  const auto s = project_stats(rs);
  ASSERT_EQ(s.rows.size(), 2u);
  EXPECT_EQ(s.rows[0].repo, "r1");
  EXPECT_EQ(s.rows[0].total(), 3u);
  EXPECT_EQ(s.rows[1].count(Tool::Pmd, true), 1u);
  EXPECT_EQ(s.totals.repo, "Sum");
  EXPECT_EQ(s.totals.total(), 4u);
  EXPECT_EQ(s.totals.count(Tool::Pmd, false), 1u);
  EXPECT_EQ(s.totals.count(Tool::SpotBugs, false), 1u);
  EXPECT_EQ(s.totals.count(Tool::Builtin, true), 1u);
}

TEST(ProjectStats, RowsSumToTotals) {
  const auto records = generate_records(900, 4);
  const auto s = project_stats(records);
  std::size_t sum = 0;
  for (const auto& r : s.rows) sum += r.total();
  EXPECT_EQ(sum, records.size());
  EXPECT_EQ(s.totals.total(), records.size());
}

TEST(Cochran, ReportedSampleSize) {
  EXPECT_EQ(cochran_sample_size({1'083'073, 1.65, 0.5, 0.10}), 69);
  EXPECT_EQ(cochran_sample_size({1'083'073, 1.645, 0.5, 0.10}), 68);
}

TEST(Cochran, MatchesOracleAcrossInputs) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 2000; ++i) {
    const SampleSpec s{1 + static_cast<std::int64_t>(rng() % 2'000'000), 1.0 + (rng() % 2000) / 1000.0,
                       (rng() % 101) / 100.0, 0.01 + (rng() % 30) / 100.0};
    const long double raw = cochran_oracle(s.population, s.z, s.p_hat, s.epsilon);
    if (std::abs(raw - std::round(raw)) < 1e-6) continue;  // rounding-boundary cases are ambiguous
    const auto expected = std::clamp(static_cast<std::int64_t>(std::ceil(raw)), std::int64_t{1}, s.population);
    EXPECT_EQ(cochran_sample_size(s), expected) << s.population << " " << s.z << " " << s.p_hat << " " << s.epsilon;
  }
}

TEST(Cochran, ClampedToPopulationAndMonotone) {
  EXPECT_EQ(cochran_sample_size({10, 1.96, 0.5, 0.01}), 10);
  EXPECT_EQ(cochran_sample_size({1, 1.96, 0.5, 0.01}), 1);
  std::int64_t prev = 0;
  for (double eps = 0.30; eps >= 0.019; eps -= 0.01) {
    const auto n = cochran_sample_size({1'000'000, 1.96, 0.5, eps});
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(Cochran, BadInputs) {
  EXPECT_THROW(cochran_sample_size({0, 1.96, 0.5, 0.1}), ConfigError);
  EXPECT_THROW(cochran_sample_size({10, 1.96, 0.5, 0.0}), ConfigError);
  EXPECT_THROW(cochran_sample_size({10, 1.96, 1.5, 0.1}), ConfigError);
}

TEST(Cochran, ZForConfidence) {
  EXPECT_DOUBLE_EQ(z_for_confidence(0.90), 1.645);
  EXPECT_DOUBLE_EQ(z_for_confidence(0.95), 1.96);
  EXPECT_DOUBLE_EQ(z_for_confidence(0.99), 2.576);
}

TEST(Sampling, FullDrawIsPermutation) {
  const auto records = generate_records(100, 3);
  auto sample = draw_validation_sample(records, 100, 7);
  auto sorted_a = records;
  auto key = [](const LabeledRecord& a, const LabeledRecord& b) { return record_to_json(a) < record_to_json(b); };
  std::sort(sorted_a.begin(), sorted_a.end(), key);
  std::sort(sample.begin(), sample.end(), key);
  EXPECT_EQ(sample, sorted_a);
}

TEST(Sampling, SeededAndBounded) {
  const auto records = generate_records(200, 3);
  EXPECT_EQ(draw_validation_sample(records, 20, 5), draw_validation_sample(records, 20, 5));
  EXPECT_NE(draw_validation_sample(records, 20, 5), draw_validation_sample(records, 20, 6));
  EXPECT_THROW(draw_validation_sample(records, 201, 5), Error);
  EXPECT_TRUE(draw_validation_sample(records, 0, 5).empty());
}

TEST(Sampling, InclusionIsUniform) {
  // 2000 draws of 10 out of 100: each record is expected 200 times (sd ~13.4).
  std::vector<LabeledRecord> records = generate_records(100, 11);
  for (std::size_t i = 0; i < records.size(); ++i) records[i].warning_msg = std::to_string(i);
  std::vector<int> hits(records.size());
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const auto s = draw_validation_sample(records, 10, seed);
    std::set<std::string> distinct;
    for (const auto& r : s) {
      ++hits[std::stoul(r.warning_msg)];
      distinct.insert(r.warning_msg);
    }
    ASSERT_EQ(distinct.size(), 10u);
  }
  for (int h : hits) {
    EXPECT_GT(h, 140);
    EXPECT_LT(h, 260);
  }
}

TEST(Emitters, CsvIsRectangular) {
  const auto records = generate_records(500, 6);
  for (const auto& csv : {category_csv(category_distribution(records, Tool::Pmd)),
                          coverage_csv(rule_coverage_classes(records, bundled_universe(Tool::SpotBugs)), 490),
                          projects_csv(project_stats(records))}) {
    const auto rows = parse_csv(csv);
    ASSERT_GE(rows.size(), 2u);
    for (const auto& r : rows) EXPECT_EQ(r.size(), rows[0].size()) << csv;
  }
}

TEST(Emitters, CsvFieldQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(parse_csv(csv_field("x,\"y\"\nz") + "\n")[0][0], "x,\"y\"\nz");
}

TEST(Emitters, SvgAndTablesAreNonEmpty) {
  const auto records = generate_records(100, 6);
  const auto cat = category_distribution(records, Tool::Pmd);
  EXPECT_NE(category_svg(cat, "PMD").find("<svg"), std::string::npos);
  EXPECT_NE(category_table(cat).find("Sum"), std::string::npos);
  const auto s = project_stats(records);
  EXPECT_NE(projects_svg(s, "Projects").find("</svg>"), std::string::npos);
  EXPECT_NE(projects_table(s).find("Sum"), std::string::npos);
  const auto c = rule_coverage_classes(records, bundled_universe(Tool::Pmd));
  EXPECT_NE(coverage_svg(c, 283, "PMD").find("<svg"), std::string::npos);
  EXPECT_NE(coverage_table(c, 283).find("283"), std::string::npos);
}
