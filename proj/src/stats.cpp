#include "nascar/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "json.hpp"
#include "nascar/errors.hpp"

namespace nascar {
namespace {

constexpr std::string_view kUnknownCategory = "(unknown)";

bool excluded_category(Tool tool, std::string_view category) {
  return (tool == Tool::Pmd && category == "Documentation") || (tool == Tool::SpotBugs && category == "NOISE");
}

// Shares in hundredths of a percent; floors are topped up in order of largest
// remainder (earlier rows first on ties) so the column sums to 10000.
std::vector<double> rounded_percentages(const std::vector<std::size_t>& counts) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  std::vector<double> out(counts.size(), 0.0);
  if (total == 0) return out;
  std::vector<std::uint64_t> units(counts.size());
  std::vector<std::uint64_t> rem(counts.size());
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::uint64_t scaled = static_cast<std::uint64_t>(counts[i]) * 10000;
    units[i] = scaled / total;
    rem[i] = scaled % total;
    assigned += units[i];
  }
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t k = 0; assigned < 10000; ++k, ++assigned) ++units[order[k]];
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = static_cast<double>(units[i]) / 100.0;
  return out;
}

std::string fixed2(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << v;
  return ss.str();
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = gen();
    if (r >= threshold) return r % bound;
  }
}

struct Series {
  std::string name;
  std::string color;
  std::vector<double> values;
};

// Horizontal grouped bars; values are drawn relative to the largest one.
std::string bar_chart_svg(std::string_view title, const std::vector<std::string>& labels,
                          const std::vector<Series>& series, std::string_view unit) {
  const int label_w = 220;
  const int plot_w = 420;
  const int bar_h = 14;
  const int group_h = bar_h * static_cast<int>(series.size()) + 10;
  const int top = 50;
  const int height = top + group_h * static_cast<int>(labels.size()) + 30;
  const int width = label_w + plot_w + 120;
  double max_v = 0.0;
  for (const auto& s : series) {
    for (double v : s.values) max_v = std::max(max_v, v);
  }
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"10\" y=\"20\" font-size=\"15\">" << xml_escape(title) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const int x = label_w + static_cast<int>(s) * 140;
    o << "<rect x=\"" << x << "\" y=\"28\" width=\"12\" height=\"12\" fill=\"" << series[s].color << "\"/>";
    o << "<text x=\"" << x + 16 << "\" y=\"38\">" << xml_escape(series[s].name) << "</text>\n";
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y0 = top + static_cast<int>(i) * group_h;
    o << "<text x=\"" << label_w - 8 << "\" y=\"" << y0 + group_h / 2 + 2 << "\" text-anchor=\"end\">"
      << xml_escape(labels[i]) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = series[s].values[i];
      const int w = max_v > 0 ? static_cast<int>(std::lround(v / max_v * plot_w)) : 0;
      const int y = y0 + static_cast<int>(s) * bar_h;
      o << "<rect x=\"" << label_w << "\" y=\"" << y << "\" width=\"" << w << "\" height=\"" << bar_h - 2
        << "\" fill=\"" << series[s].color << "\"/>";
      o << "<text x=\"" << label_w + w + 4 << "\" y=\"" << y + bar_h - 3 << "\">" << (unit == "%" ? fixed2(v) : std::to_string(std::llround(v))) << unit << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

std::string pad(std::string_view s, std::size_t w, bool right = false) {
  std::string out(s);
  if (out.size() < w) {
    if (right) {
      out.insert(0, w - out.size(), ' ');
    } else {
      out.append(w - out.size(), ' ');
    }
  }
  return out;
}

// Plain-text table with the first column left-aligned and the rest right-aligned.
std::string text_table(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return {};
  std::vector<std::size_t> w(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
  }
  std::string out;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t i = 0; i < rows[k].size(); ++i) {
      if (i > 0) out += "  ";
      out += pad(rows[k][i], w[i], i > 0);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
    if (k == 0) {
      std::size_t total = 0;
      for (std::size_t x : w) total += x;
      out += std::string(total + 2 * (w.size() - 1), '-') + '\n';
    }
  }
  return out;
}

std::string csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i > 0) out += ',';
      out += csv_field(r[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<std::string>> category_rows(const std::vector<CategoryRow>& rows) {
  std::vector<std::vector<std::string>> t{{"category", "actionable", "actionable_pct", "non_actionable", "non_actionable_pct"}};
  for (const auto& r : rows) {
    t.push_back({r.category, std::to_string(r.actionable), fixed2(r.actionable_pct), std::to_string(r.non_actionable),
                 fixed2(r.non_actionable_pct)});
  }
  std::size_t a = 0;
  std::size_t na = 0;
  for (const auto& r : rows) {
    a += r.actionable;
    na += r.non_actionable;
  }
  t.push_back({"Sum", std::to_string(a), a ? "100.00" : "0.00", std::to_string(na), na ? "100.00" : "0.00"});
  return t;
}

std::vector<std::vector<std::string>> coverage_rows(const CoverageCounts& c, std::size_t universe_size) {
  const auto pct = [&](std::size_t v) {
    return universe_size == 0 ? std::string("0.00") : fixed2(100.0 * static_cast<double>(v) / static_cast<double>(universe_size));
  };
  return {{"class", "rules", "pct"},
          {"BOTH", std::to_string(c.both), pct(c.both)},
          {"ONLY_A", std::to_string(c.only_a), pct(c.only_a)},
          {"ONLY_NA", std::to_string(c.only_na), pct(c.only_na)},
          {"NEITHER", std::to_string(c.neither), pct(c.neither)},
          {"TOTAL", std::to_string(c.total()), pct(c.total())}};
}

std::vector<std::vector<std::string>> project_rows(const ProjectStats& s) {
  std::vector<std::vector<std::string>> t{
      {"repo", "pmd_a", "pmd_na", "spotbugs_a", "spotbugs_na", "builtin_a", "builtin_na", "total"}};
  const auto row = [](const ProjectRow& r) {
    return std::vector<std::string>{r.repo,
                                    std::to_string(r.count(Tool::Pmd, true)),
                                    std::to_string(r.count(Tool::Pmd, false)),
                                    std::to_string(r.count(Tool::SpotBugs, true)),
                                    std::to_string(r.count(Tool::SpotBugs, false)),
                                    std::to_string(r.count(Tool::Builtin, true)),
                                    std::to_string(r.count(Tool::Builtin, false)),
                                    std::to_string(r.total())};
  };
  for (const auto& r : s.rows) t.push_back(row(r));
  t.push_back(row(s.totals));
  return t;
}

}  // namespace

std::vector<CategoryRow> category_distribution(const std::vector<LabeledRecord>& records, const RuleUniverse& universe) {
  const std::string_view tool_name = to_string(universe.tool);
  std::map<std::string, std::array<std::size_t, 2>> counts;
  for (const auto& r : records) {
    if (r.tool != tool_name || (r.label != 0 && r.label != 1)) continue;
    std::string_view cat = universe.category(r.warning_type);
    if (cat.empty()) cat = kUnknownCategory;
    if (excluded_category(universe.tool, cat)) continue;
    ++counts[std::string(cat)][static_cast<std::size_t>(r.label)];
  }
  std::vector<CategoryRow> rows;
  std::vector<std::size_t> a;
  std::vector<std::size_t> na;
  for (const auto& [cat, c] : counts) {
    rows.push_back({cat, c[1], 0.0, c[0], 0.0});
    a.push_back(c[1]);
    na.push_back(c[0]);
  }
  const auto pa = rounded_percentages(a);
  const auto pna = rounded_percentages(na);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].actionable_pct = pa[i];
    rows[i].non_actionable_pct = pna[i];
  }
  return rows;
}

std::vector<CategoryRow> category_distribution(const std::vector<LabeledRecord>& records, Tool tool) {
  return category_distribution(records, bundled_universe(tool));
}

std::string_view to_string(CoverageClass c) noexcept {
  switch (c) {
    case CoverageClass::Both: return "BOTH";
    case CoverageClass::OnlyA: return "ONLY_A";
    case CoverageClass::OnlyNA: return "ONLY_NA";
    case CoverageClass::Neither: return "NEITHER";
  }
  return "NEITHER";
}

CoverageCounts rule_coverage_classes(const std::vector<LabeledRecord>& records, const RuleUniverse& universe) {
  const std::string_view tool_name = to_string(universe.tool);
  std::map<std::string, std::array<bool, 2>, std::less<>> seen;
  CoverageCounts out;
  for (const auto& r : records) {
    if (r.tool != tool_name || (r.label != 0 && r.label != 1)) continue;
    if (!universe.contains(r.warning_type)) {
      ++out.unknown_rules[r.warning_type];
      continue;
    }
    seen[r.warning_type][static_cast<std::size_t>(r.label)] = true;
  }
  for (const auto& rule : universe.rule_ids) {
    auto it = seen.find(rule);
    const bool a = it != seen.end() && it->second[1];
    const bool na = it != seen.end() && it->second[0];
    CoverageClass c = a && na ? CoverageClass::Both : a ? CoverageClass::OnlyA : na ? CoverageClass::OnlyNA : CoverageClass::Neither;
    out.by_rule[rule] = c;
    switch (c) {
      case CoverageClass::Both: ++out.both; break;
      case CoverageClass::OnlyA: ++out.only_a; break;
      case CoverageClass::OnlyNA: ++out.only_na; break;
      case CoverageClass::Neither: ++out.neither; break;
    }
  }
  return out;
}

std::size_t ProjectRow::total() const {
  std::size_t t = 0;
  for (const auto& c : counts) t += c[0] + c[1];
  return t;
}

ProjectStats project_stats(const std::vector<LabeledRecord>& records) {
  std::map<std::string, ProjectRow> by_repo;
  ProjectStats s;
  s.totals.repo = "Sum";
  for (const auto& r : records) {
    const auto tool = parse_tool(r.tool);
    if (!tool || (r.label != 0 && r.label != 1)) continue;
    ProjectRow& row = by_repo[r.repo];
    row.repo = r.repo;
    ++row.counts[static_cast<std::size_t>(*tool)][static_cast<std::size_t>(r.label)];
    ++s.totals.counts[static_cast<std::size_t>(*tool)][static_cast<std::size_t>(r.label)];
  }
  for (auto& [repo, row] : by_repo) s.rows.push_back(std::move(row));
  return s;
}

std::int64_t cochran_sample_size(const SampleSpec& spec) {
  if (spec.population < 1) throw ConfigError("population must be at least 1");
  if (!(spec.epsilon > 0.0)) throw ConfigError("margin of error must be positive");
  if (!(spec.p_hat >= 0.0 && spec.p_hat <= 1.0)) throw ConfigError("proportion must lie in [0, 1]");
  const double n0 = spec.z * spec.z * spec.p_hat * (1.0 - spec.p_hat) / (spec.epsilon * spec.epsilon);
  const double n = n0 / (1.0 + (n0 - 1.0) / static_cast<double>(spec.population));
  // The small slack keeps exact integers (up to rounding noise) from rounding up.
  const auto size = static_cast<std::int64_t>(std::ceil(n - 1e-9));
  return std::clamp<std::int64_t>(size, 0, spec.population);
}

double z_for_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must lie in (0, 1)");
  const boost::math::normal_distribution<double> normal;
  const double z = boost::math::quantile(normal, 1.0 - (1.0 - confidence) / 2.0);
  return std::round(z * 1000.0) / 1000.0;
}

std::vector<LabeledRecord> draw_validation_sample(const std::vector<LabeledRecord>& records, std::size_t n,
                                                  std::uint64_t seed) {
  if (n > records.size()) {
    throw Error("sample size " + std::to_string(n) + " exceeds population " + std::to_string(records.size()));
  }
  std::vector<std::size_t> idx(records.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_below(gen, records.size() - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<LabeledRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(records[idx[i]]);
  return out;
}

std::string sample_to_jsonl(const std::vector<LabeledRecord>& sample) {
  std::string out;
  for (const auto& r : sample) {
    nlohmann::ordered_json j;
    j["repo"] = r.repo;
    j["commit_sha"] = r.commit_sha;
    j["parent_sha"] = r.parent_sha;
    j["filename"] = r.filename;
    j["positions"] = r.positions;
    j["tool"] = r.tool;
    j["warning_type"] = r.warning_type;
    j["warning_msg"] = r.warning_msg;
    j["filepath"] = r.filepath;
    j["label"] = r.label;
    out += j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string category_csv(const std::vector<CategoryRow>& rows) { return csv(category_rows(rows)); }
std::string category_table(const std::vector<CategoryRow>& rows) { return text_table(category_rows(rows)); }

std::string category_svg(const std::vector<CategoryRow>& rows, std::string_view title) {
  std::vector<std::string> labels;
  Series a{"Actionable (%)", "#d95f02", {}};
  Series na{"Non-actionable (%)", "#1b9e77", {}};
  for (const auto& r : rows) {
    labels.push_back(r.category);
    a.values.push_back(r.actionable_pct);
    na.values.push_back(r.non_actionable_pct);
  }
  return bar_chart_svg(title, labels, {a, na}, "%");
}

std::string coverage_csv(const CoverageCounts& c, std::size_t universe_size) { return csv(coverage_rows(c, universe_size)); }
std::string coverage_table(const CoverageCounts& c, std::size_t universe_size) {
  std::string out = text_table(coverage_rows(c, universe_size));
  for (const auto& [rule, n] : c.unknown_rules) out += "unknown rule: " + rule + " (" + std::to_string(n) + " records)\n";
  return out;
}

std::string coverage_svg(const CoverageCounts& c, std::size_t universe_size, std::string_view title) {
  Series s{"Rules", "#7570b3", {}};
  for (std::size_t v : {c.both, c.only_a, c.only_na, c.neither}) s.values.push_back(static_cast<double>(v));
  (void)universe_size;
  return bar_chart_svg(title, {"BOTH", "ONLY_A", "ONLY_NA", "NEITHER"}, {s}, "");
}

std::string projects_csv(const ProjectStats& s) { return csv(project_rows(s)); }
std::string projects_table(const ProjectStats& s) { return text_table(project_rows(s)); }

std::string projects_svg(const ProjectStats& s, std::string_view title) {
  std::vector<std::string> labels;
  Series a{"Actionable", "#d95f02", {}};
  Series na{"Non-actionable", "#1b9e77", {}};
  for (const auto& r : s.rows) {
    labels.push_back(r.repo);
    std::size_t ca = 0;
    std::size_t cn = 0;
    for (const auto& c : r.counts) {
      cn += c[0];
      ca += c[1];
    }
    a.values.push_back(static_cast<double>(ca));
    na.values.push_back(static_cast<double>(cn));
  }
  return bar_chart_svg(title, labels, {a, na}, "");
}

}  // namespace nascar
