// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "nascar/analyzer.hpp"
#include "nascar/dataset.hpp"
#include "nascar/dedup.hpp"
#include "nascar/pipeline.hpp"
#include "nascar/stats.hpp"
#include "support/support.hpp"

using namespace nascar;
using namespace nascar::testing;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Shared by criteria 1, 2 and 9.
struct MinedHistory {
  TempDir tmp;
  std::string url;
  std::map<std::string, std::string> tags;
  int mine_exit = -1;
  int create_exit = -1;
  std::vector<LabeledRecord> records;
  double seconds = 0;
};

MinedHistory& history() {
  static MinedHistory m;
  static const bool ready = [] {
    const auto t0 = std::chrono::steady_clock::now();
    m.url = (m.tmp.path() / "origin").string();
    m.tags = build_history_fixture(m.url);
    RunConfig c;
    c.repos = {m.url};
    c.workdir = m.tmp.path() / "work";
    c.workers = 2;
    std::ostringstream log;
    m.mine_exit = cmd_mine(c, log);
    std::ostringstream out;
    std::ostringstream err;
    m.create_exit = cmd_create_dataset({c.workdir, m.tmp.path() / "out", DatasetFormat::Columnar, false}, out, err);
    if (m.create_exit == kExitOk) m.records = read_dataset(m.tmp.path() / "out" / "dataset.parquet");
    m.seconds = seconds_since(t0);
    return true;
  }();
  (void)ready;
  return m;
}

// Sets with |A ∩ B| = common, |A \ B| = a, |B \ A| = b.
std::pair<ShingleSet, ShingleSet> planted(std::mt19937_64& rng, std::size_t common, std::size_t a, std::size_t b) {
  std::set<std::uint64_t> used;
  const auto fresh = [&] {
    for (;;) {
      const auto v = rng();
      if (used.insert(v).second) return v;
    }
  };
  ShingleSet x;
  ShingleSet y;
  for (std::size_t i = 0; i < common; ++i) {
    const auto v = fresh();
    x.push_back(v);
    y.push_back(v);
  }
  for (std::size_t i = 0; i < a; ++i) x.push_back(fresh());
  for (std::size_t i = 0; i < b; ++i) y.push_back(fresh());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return {x, y};
}

Check fixture_equivalence() {
  Check c;
  auto& h = history();
  c.require(h.mine_exit == kExitOk, "mine exit " + std::to_string(h.mine_exit));
  c.require(h.create_exit == kExitOk, "create-dataset exit " + std::to_string(h.create_exit));
  const LabelSet mined = mined_pair_labels(h.tmp.path() / "work", h.url, h.tags);
  const LabelSet oracle = oracle_pair_labels();
  std::size_t hit = 0;
  for (const auto& f : mined) hit += oracle.contains(f);
  const double precision = mined.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(mined.size());
  const double recall = oracle.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(oracle.size());
  c.require(precision == 1.0 && recall == 1.0,
            "precision " + std::to_string(precision) + ", recall " + std::to_string(recall));
  c.require(dataset_labels(h.records, h.tags) == oracle_dataset_labels(), "dataset rows differ from the oracle");
  c.require(h.seconds < 10.0, "took " + std::to_string(h.seconds) + " s");
  if (c.ok) {
    c.detail = std::to_string(mined.size()) + " labels, precision 1, recall 1, " + std::to_string(h.seconds).substr(0, 4) +
               " s";
  }
  return c;
}

Check conflict_and_keep_last() {
  Check c;
  auto& h = history();
  // D.java carries the same SysOut key twice at c9; c10 fixes only one.
  std::vector<LabeledRecord> d;
  std::copy_if(h.records.begin(), h.records.end(), std::back_inserter(d),
               [](const auto& r) { return r.filename == "src/D.java"; });
  c.require(d.size() == 1, "D.java rows: " + std::to_string(d.size()));
  if (d.size() == 1) {
    const auto span = parse_positions(d[0].positions);
    c.require(d[0].label == 1 && span && span->start_line == 5, "D.java row is not actionable at line 5");
  }
  // B.java's SysOut persists through four pairs; only the c5-c6 occurrence stays.
  std::size_t occurrences = 0;
  for (const auto& f : mined_pair_labels(h.tmp.path() / "work", h.url, h.tags)) {
    occurrences += f.find("|NA|src/B.java|SysOut|") != std::string::npos;
  }
  c.require(occurrences == 4, "B.java NA occurrences in pairs: " + std::to_string(occurrences));
  std::vector<LabeledRecord> b;
  std::copy_if(h.records.begin(), h.records.end(), std::back_inserter(b), [](const auto& r) {
    return r.filename == "src/B.java" && r.warning_type == "SysOut" && r.label == 0;
  });
  c.require(b.size() == 1, "B.java NA rows: " + std::to_string(b.size()));
  if (b.size() == 1) c.require(b[0].commit_sha == h.tags.at("c6"), "kept occurrence is not the latest");
  if (c.ok) c.detail = "D.java actionable only, B.java NA kept once at c6";
  return c;
}

Check minhash_accuracy() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  double sum = 0;
  double worst = 0;
  const int pairs = 500;
  for (int i = 0; i < pairs; ++i) {
    // Union of 200 elements, exact Jaccard stepping from 0 to 1.
    const std::size_t uni = 200;
    const auto common = static_cast<std::size_t>(std::lround(static_cast<double>(uni) * i / (pairs - 1)));
    const std::size_t rest = uni - common;
    const auto [a, b] = planted(rng, common, rest / 2, rest - rest / 2);
    const double exact = brute_force_jaccard(a, b);
    const double err = std::abs(estimate_jaccard(minhash(a), minhash(b)) - exact);
    sum += err;
    worst = std::max(worst, err);
  }
  const double mean = sum / pairs;
  const double secs = seconds_since(t0);
  c.require(mean <= 0.05, "mean error " + std::to_string(mean));
  c.require(worst <= 0.15, "max error " + std::to_string(worst));
  c.require(secs < 30.0, "took " + std::to_string(secs) + " s");
  if (c.ok) c.detail = "mean " + std::to_string(mean) + ", max " + std::to_string(worst);
  return c;
}

std::vector<std::string> random_words(std::mt19937_64& rng, int n) {
  std::vector<std::string> w;
  for (int i = 0; i < n; ++i) w.push_back("w" + std::to_string(rng() % 100000));
  return w;
}

// Seven lines of eight words, so the context of line 4 is the whole text.
std::string as_text(const std::vector<std::string>& words) {
  std::string s;
  for (std::size_t i = 0; i < words.size(); ++i) s += words[i] + (i % 8 == 7 ? "\n" : " ");
  return s;
}

Check lsh_recall() {
  Check c;
  std::mt19937_64 rng(99);
  int found = 0;
  const int pairs = 200;
  for (int i = 0; i < pairs; ++i) {
    const std::size_t common = 196 + rng() % 5;  // union 200, J in [0.98, 1]
    const std::size_t rest = 200 - common;
    const auto [a, b] = planted(rng, common, rest / 2, rest - rest / 2);
    if (brute_force_jaccard(a, b) < 0.98) {
      c.require(false, "planted pair below 0.98");
      break;
    }
    LshIndex index;
    index.insert(0, minhash(a));
    found += !index.query(minhash(b)).empty();
  }
  const double recall = static_cast<double>(found) / pairs;
  c.require(recall >= 0.90, "recall " + std::to_string(recall));

  // Near-duplicates that differ in one token sit below the threshold and must survive.
  std::map<std::string, std::string> files;
  std::vector<LabeledRecord> records;
  const auto add = [&](const std::string& name, const std::string& text) {
    files["files/x/" + name] = text;
    LabeledRecord r;
    r.tool = "Builtin";
    r.warning_type = "SysOut";
    r.warning_msg = "m";
    r.repo = "r";
    r.filename = name;
    r.positions = positions_json(Span{4, 4, {}, {}});
    r.filepath = "files/x/" + name;
    records.push_back(r);
  };
  for (int i = 0; i < 100; ++i) {
    auto words = random_words(rng, 56);
    add("F" + std::to_string(i) + ".java", as_text(words));
    if (i % 3 == 0) add("G" + std::to_string(i) + ".java", as_text(words));
    if (i % 3 == 1) {
      words[28] = "changed";  // three of 54 shingles differ: J = 51/57
      add("H" + std::to_string(i) + ".java", as_text(words));
    }
  }
  const SourceLoader loader = [&](const LabeledRecord& r) -> std::optional<std::string> { return files.at(r.filepath); };
  const DedupResult r = dedup_dataset(records, loader);
  std::size_t false_drops = 0;
  for (const auto& e : r.drop_log) {
    const auto ctx = [&](const LabeledRecord& x) { return extract_context(files.at(x.filepath), Span{4, 4, {}, {}}); };
    if (estimate_jaccard(minhash(shingle(ctx(e.dropped))), minhash(shingle(ctx(e.kept)))) < kDuplicateThreshold) {
      ++false_drops;
    }
  }
  c.require(false_drops == 0, std::to_string(false_drops) + " drops below the threshold");
  // Every exact copy goes; near-duplicates go only when their estimate reaches the threshold.
  for (const auto& k : r.kept) c.require(k.filename[0] != 'G', "exact copy kept: " + k.filename);
  if (c.ok) {
    c.detail = "recall " + std::to_string(recall) + ", " + std::to_string(r.dropped_count) +
               " drops, 0 below the threshold";
  }
  return c;
}

Check dedup_determinism() {
  Check c;
  TempDir tmp;
  auto records = generate_records(2000, 5, tmp.path());
  // Copies under new ids so there is something to drop.
  std::mt19937_64 rng(6);
  for (int i = 0; i < 300; ++i) {
    LabeledRecord r = records[rng() % records.size()];
    r.warning_msg += " copy";
    records.push_back(r);
  }
  write_dataset(records, tmp / "in.parquet", DatasetFormat::Columnar);
  std::ostringstream out;
  std::ostringstream err;
  DedupOptions o{tmp / "in.parquet", tmp / "a.parquet", tmp.path(), {}, 1};
  c.require(cmd_dedup(o, out, err) == kExitOk, "first run failed: " + err.str());
  o.out = tmp / "b.parquet";
  o.workers = 4;
  c.require(cmd_dedup(o, out, err) == kExitOk, "second run failed");
  c.require(read_file(tmp / "a.parquet") == read_file(tmp / "b.parquet"), "outputs differ");
  c.require(read_file(tmp / "a.parquet.drops.jsonl") == read_file(tmp / "b.parquet.drops.jsonl"), "drop logs differ");
  const auto first = read_dataset(tmp / "a.parquet");
  c.require(first.size() < records.size(), "nothing dropped");
  o.dataset = tmp / "a.parquet";
  o.out = tmp / "c.parquet";
  c.require(cmd_dedup(o, out, err) == kExitOk, "third run failed");
  const auto again = read_dataset(tmp / "c.parquet");
  c.require(again == first, "re-run dropped " + std::to_string(first.size() - again.size()) + " records");
  if (c.ok) {
    c.detail = std::to_string(records.size()) + " -> " + std::to_string(first.size()) + ", re-run drops 0";
  }
  return c;
}

Check cochran() {
  Check c;
  const auto n165 = cochran_sample_size({1'083'073, 1.65, 0.5, 0.10});
  const auto n1645 = cochran_sample_size({1'083'073, 1.645, 0.5, 0.10});
  c.require(n165 == 69, "z=1.65 gives " + std::to_string(n165));
  c.require(n1645 == 68, "z=1.645 gives " + std::to_string(n1645));
  if (c.ok) c.detail = "69 at z=1.65, 68 at z=1.645";
  return c;
}

Check schema_conformance() {
  Check c;
  TempDir tmp;
  const auto records = generate_records(1000, 17, tmp.path());
  for (const auto* name : {"d.parquet", "d.jsonl"}) {
    const fs::path p = tmp / name;
    write_dataset(records, p, format_for_path(p));
    c.require(read_dataset(p) == records, std::string(name) + " round-trip differs");
  }
  std::size_t valid = 0;
  for (const auto& r : records) valid += validate_record(r, tmp.path()).empty();
  c.require(valid == records.size(), "generated records rejected: " + std::to_string(records.size() - valid));
  const auto mutations = record_mutations();
  std::size_t flagged = 0;
  for (const auto& m : mutations) {
    for (std::size_t i = 0; i < 20; ++i) {
      LabeledRecord r = records[i * 37];
      m.apply(r);
      const auto v = validate_record(r, tmp.path());
      if (std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.field == m.field; })) {
        ++flagged;
      } else {
        c.require(false, "mutation not flagged: " + m.name);
      }
    }
  }
  if (c.ok) {
    c.detail = "1000 rows x 2 formats, " + std::to_string(flagged) + "/" + std::to_string(mutations.size() * 20) +
               " mutants flagged";
  }
  return c;
}

Check report_parsers() {
  Check c;
  const PathMapping paths{"/work/tree", nullptr};
  const Report pmd = parse_pmd_report(read_file(fixtures_dir() / "pmd_sample.xml"), "a", paths);
  const Report sb = parse_spotbugs_report(read_file(fixtures_dir() / "spotbugs_sample.xml"), "a", paths);
  c.require(pmd.warnings.size() == 2, "PMD sample: " + std::to_string(pmd.warnings.size()) + " warnings");
  c.require(sb.warnings.size() == 2, "SpotBugs sample: " + std::to_string(sb.warnings.size()) + " warnings");
  for (const auto& w : pmd.warnings) c.require(w.category != "Documentation", "Documentation warning kept");

  // Generated reports with a random share of Documentation violations.
  std::mt19937_64 rng(8);
  const char* rulesets[] = {"Best Practices", "Documentation", "Design", "Error Prone"};
  for (int trial = 0; trial < 50; ++trial) {
    std::string xml = "<?xml version=\"1.0\"?>\n<pmd version=\"7.0.0\">\n<file name=\"/work/tree/src/X.java\">\n";
    std::size_t expected = 0;
    const int n = static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) {
      const char* rs = rulesets[rng() % 4];
      expected += std::string(rs) != "Documentation";
      const int line = 1 + static_cast<int>(rng() % 100);
      xml += "<violation beginline=\"" + std::to_string(line) + "\" endline=\"" + std::to_string(line) +
             "\" begincolumn=\"1\" endcolumn=\"2\" rule=\"R" + std::to_string(i) + "\" ruleset=\"" + rs +
             "\" priority=\"3\">msg " + std::to_string(i) + "</violation>\n";
    }
    xml += "</file>\n</pmd>\n";
    const Report r = parse_pmd_report(xml, "a", paths);
    c.require(r.warnings.size() == expected, "generated report: " + std::to_string(r.warnings.size()) + " != " +
                                                 std::to_string(expected));
    for (const auto& w : r.warnings) c.require(w.category != "Documentation", "Documentation warning kept");
  }
  if (c.ok) c.detail = "PMD 2, SpotBugs 2, Documentation excluded in 51 reports";
  return c;
}

Check coverage_partition() {
  Check c;
  const auto& pmd = bundled_universe(Tool::Pmd);
  const auto& sb = bundled_universe(Tool::SpotBugs);
  c.require(pmd.size() == 283 && sb.size() == 490,
            "universe sizes " + std::to_string(pmd.size()) + "/" + std::to_string(sb.size()));
  std::vector<std::vector<LabeledRecord>> datasets{{}, history().records};
  for (std::uint64_t seed = 1; seed <= 40; ++seed) datasets.push_back(generate_records(seed * 97, seed));
  for (const auto& ds : datasets) {
    for (const RuleUniverse* u : {&pmd, &sb}) {
      const auto counts = rule_coverage_classes(ds, *u);
      c.require(counts.total() == u->size(),
                "partition sums to " + std::to_string(counts.total()) + " for " + std::string(to_string(u->tool)));
    }
  }
  if (c.ok) c.detail = std::to_string(datasets.size()) + " datasets sum to 283 / 490";
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"1 fixture equivalence", fixture_equivalence},
      {"2 conflict and keep-last", conflict_and_keep_last},
      {"3 minhash accuracy", minhash_accuracy},
      {"4 lsh recall", lsh_recall},
      {"5 dedup determinism and idempotence", dedup_determinism},
      {"6 cochran sample size", cochran},
      {"7 schema conformance", schema_conformance},
      {"8 report parsers", report_parsers},
      {"9 coverage partition", coverage_partition},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    failed += !c.ok;
    std::cout << (c.ok ? "PASS " : "FAIL ") << name << " (" << c.detail << ")\n" << std::flush;
  }
  return failed == 0 ? 0 : 1;
}
