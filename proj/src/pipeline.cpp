#include "nascar/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nascar/dedup.hpp"
#include "nascar/errors.hpp"
#include "nascar/repo.hpp"
#include "nascar/rules.hpp"
#include "nascar/stats.hpp"
#include "nascar/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace nascar {
namespace {

constexpr std::string_view kNoJavaChange = "no-java-change";
constexpr std::string_view kBuildFailedReason = "build-failed";
constexpr std::string_view kAnalyzerError = "analyzer-error";

std::string dump(const ordered_json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_text(const fs::path& p, std::string_view text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("cannot write " + p.string());
}

void append_text(const fs::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary | std::ios::app);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("cannot write " + p.string());
}

class Logger {
 public:
  explicit Logger(std::ostream& os) : os_(os) {}
  void operator()(const std::string& line) {
    std::lock_guard lock(m_);
    os_ << line << '\n';
    os_.flush();
  }

 private:
  std::ostream& os_;
  std::mutex m_;
};

std::string tool_key(Tool t) {
  std::string s(to_string(t));
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct Outcome {
  std::optional<Report> report;
  /// kBuildFailedReason or kAnalyzerError when report is empty.
  std::string reason;
  std::string detail;
};

// One analysis per (tool, commit): the first caller computes, later callers
// wait on the same future.
class ReportCache {
 public:
  ReportCache(const Repository& repo, const RunConfig& config, fs::path scratch)
      : repo_(repo), config_(config), scratch_(std::move(scratch)) {}

  Outcome get(Tool tool, const std::string& sha) {
    std::promise<Outcome> promise;
    std::shared_future<Outcome> future;
    bool owner = false;
    {
      std::lock_guard lock(m_);
      auto key = std::make_pair(tool, sha);
      auto it = futures_.find(key);
      if (it == futures_.end()) {
        future = promise.get_future().share();
        futures_.emplace(key, future);
        ++runs_[key];
        owner = true;
      } else {
        future = it->second;
      }
    }
    if (owner) promise.set_value(analyze(tool, sha));
    return future.get();
  }

  /// Number of analyses per (tool, sha).
  std::map<std::pair<Tool, std::string>, int> runs() const {
    std::lock_guard lock(m_);
    return runs_;
  }

 private:
  Outcome analyze(Tool tool, const std::string& sha) {
    Outcome out;
    try {
      if (tool == Tool::Builtin) {
        const auto files = read_files_at(repo_, sha, repo_.list_java_files(sha));
        out.report = builtin_analyze(files, sha);
        return out;
      }
      const std::string name = tool_key(tool) + "-" + sha;
      const fs::path tree = fs::absolute(scratch_ / "trees" / name);
      const fs::path report = fs::absolute(scratch_ / "reports" / (name + ".xml"));
      std::error_code ec;
      fs::remove_all(tree, ec);
      fs::create_directories(report.parent_path());
      export_tree(repo_, sha, tree);
      ExternalRun run = run_external_analyzer(tool, tree, report, config_.tools);
      if (run.ok()) {
        PathMapping paths;
        paths.worktree_root = tree.string();
        paths.file_exists = [tree](const std::string& rel) { return fs::exists(tree / rel); };
        const std::string xml = read_text(*run.report);
        out.report = tool == Tool::Pmd ? parse_pmd_report(xml, sha, paths, report.string())
                                       : parse_spotbugs_report(xml, sha, paths, report.string());
      } else {
        out.reason = run.skip_reason == kBuildFailed ? kBuildFailedReason : kAnalyzerError;
        out.detail = run.skip_reason;
      }
      fs::remove_all(tree, ec);
    } catch (const std::exception& e) {
      out.report.reset();
      out.reason = kAnalyzerError;
      out.detail = e.what();
    }
    return out;
  }

  const Repository& repo_;
  const RunConfig& config_;
  fs::path scratch_;
  mutable std::mutex m_;
  std::map<std::pair<Tool, std::string>, std::shared_future<Outcome>> futures_;
  std::map<std::pair<Tool, std::string>, int> runs_;
};

struct PairOutcome {
  ordered_json manifest;
  bool error = false;
};

std::string pair_file_name(const CommitPair& pair) { return pair.child.sha + ".jsonl"; }

PairOutcome process_pair(const Repository& repo, const CommitPair& pair, const RunConfig& config, ReportCache& cache,
                         const fs::path& pairs_dir) {
  PairOutcome result;
  ordered_json& m = result.manifest;
  m["type"] = "pair";
  m["repo"] = repo.url();
  m["chain_index"] = pair.chain_index;
  m["parent"] = pair.parent.sha;
  m["child"] = pair.child.sha;
  try {
    const auto diffs = diff_java_changes(repo, pair);
    if (diffs.empty()) {
      m["status"] = "skipped";
      m["reason"] = kNoJavaChange;
      return result;
    }
    PairClassification all;
    ordered_json tool_skips = ordered_json::object();
    std::string first_reason;
    for (Tool tool : config.analyzers) {
      const Outcome parent = cache.get(tool, pair.parent.sha);
      const Outcome child = cache.get(tool, pair.child.sha);
      if (!parent.report || !child.report) {
        const Outcome& bad = parent.report ? child : parent;
        tool_skips[std::string(to_string(tool))] = {{"reason", bad.reason}, {"detail", bad.detail}};
        if (first_reason.empty()) first_reason = bad.reason;
        continue;
      }
      PairClassification c = classify_pair(*parent.report, *child.report, diffs, pair);
      std::move(c.actionable.begin(), c.actionable.end(), std::back_inserter(all.actionable));
      std::move(c.non_actionable.begin(), c.non_actionable.end(), std::back_inserter(all.non_actionable));
    }
    if (tool_skips.size() == config.analyzers.size()) {
      m["status"] = "skipped";
      m["reason"] = first_reason;
      m["tools"] = tool_skips;
      return result;
    }
    std::string lines;
    for (const auto& cw : all.actionable) lines += classified_to_json(cw) + '\n';
    for (const auto& cw : all.non_actionable) lines += classified_to_json(cw) + '\n';
    write_text(pairs_dir / pair_file_name(pair), lines);
    m["status"] = "mined";
    m["actionable"] = all.actionable.size();
    m["non_actionable"] = all.non_actionable.size();
    if (!tool_skips.empty()) m["tools"] = tool_skips;
  } catch (const std::exception& e) {
    m["status"] = "skipped";
    m["reason"] = "error";
    m["detail"] = e.what();
    result.error = true;
  }
  return result;
}

// Returns false when the repository failed.
bool mine_repo(const std::string& url, const RunConfig& config, const fs::path& manifest, Logger& log) {
  const std::string slug = repo_slug(url);
  const fs::path repo_work = config.workdir / slug;
  const fs::path pairs_dir = repo_work / "pairs";
  ordered_json summary;
  summary["type"] = "repo";
  summary["repo"] = url;
  std::string lines;
  bool ok = true;
  try {
    fs::remove_all(pairs_dir);
    fs::create_directories(pairs_dir);
    log("[" + slug + "] cloning " + url);
    Repository repo = clone_repo(url, repo_work / "repo");
    const auto commits = list_main_commits(repo, config.since, config.until);
    const auto pairs = make_pairs(commits, repo);
    log("[" + slug + "] " + std::to_string(commits.size()) + " commits, " + std::to_string(pairs.size()) + " pairs");
    write_text(repo_work / "repo.json", dump(ordered_json{{"repo", url}, {"clone", fs::absolute(repo.dir()).string()}}) + "\n");

    ReportCache cache(repo, config, repo_work / "scratch");
    std::vector<PairOutcome> outcomes(pairs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      for (std::size_t i = next++; i < pairs.size(); i = next++) {
        outcomes[i] = process_pair(repo, pairs[i], config, cache, pairs_dir);
      }
    };
    {
      std::vector<std::jthread> pool;
      const unsigned n = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(pairs.size())));
      for (unsigned w = 1; w < n; ++w) pool.emplace_back(worker);
      worker();
    }

    std::size_t mined = 0;
    std::size_t skipped = 0;
    std::size_t errors = 0;
    for (const auto& o : outcomes) {
      lines += dump(o.manifest) + '\n';
      if (o.manifest["status"] == "mined") {
        ++mined;
      } else {
        ++skipped;
      }
      if (o.error) ++errors;
    }
    for (const auto& [key, runs] : cache.runs()) {
      lines += dump(ordered_json{{"type", "analysis"}, {"repo", url}, {"tool", to_string(key.first)}, {"sha", key.second},
                                 {"runs", runs}}) +
               '\n';
    }
    summary["status"] = errors == 0 ? "ok" : "partial";
    summary["commits"] = commits.size();
    summary["pairs"] = pairs.size();
    summary["mined"] = mined;
    summary["skipped"] = skipped;
    ok = errors == 0;
    log("[" + slug + "] mined " + std::to_string(mined) + " pairs, skipped " + std::to_string(skipped));
  } catch (const std::exception& e) {
    summary["status"] = "failed";
    summary["error"] = e.what();
    ok = false;
    log("[" + slug + "] failed: " + e.what());
  }
  lines += dump(summary) + '\n';
  append_text(manifest, lines);
  return ok;
}

Label parse_label(std::string_view s) {
  if (s == "ACTIONABLE") return Label::Actionable;
  if (s == "NON_ACTIONABLE") return Label::NonActionable;
  throw DatasetError("unknown label " + std::string(s));
}

template <typename T>
T get_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw DatasetError(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw DatasetError(std::string("bad field '") + key + "'");
  }
}

Timestamp get_time(const json& j, const char* key) {
  const auto t = parse_iso8601_utc(get_field<std::string>(j, key));
  if (!t) throw DatasetError(std::string("bad timestamp in '") + key + "'");
  return *t;
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool directories) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (directories ? e.is_directory() : e.is_regular_file()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t count_label(const std::vector<LabeledRecord>& rs, int label) {
  return static_cast<std::size_t>(std::count_if(rs.begin(), rs.end(), [&](const auto& r) { return r.label == label; }));
}

}  // namespace

void validate_config(const RunConfig& config) {
  if (config.analyzers.empty()) throw ConfigError("at least one analyzer must be enabled");
  if (config.workers < 1) throw ConfigError("workers must be at least 1");
  if (config.since && config.until && *config.since > *config.until) throw ConfigError("--since is after --until");
  if (config.commit_filter != "none") {
    throw ConfigError("unknown commit filter '" + config.commit_filter + "' (available: none)");
  }
}

std::set<Tool> parse_analyzers(std::string_view list) {
  std::set<Tool> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    const std::string_view name = trim(list.substr(start, end - start));
    if (!name.empty()) {
      const auto t = parse_tool(name);
      if (!t) throw ConfigError("unknown analyzer '" + std::string(name) + "' (expected pmd, spotbugs or builtin)");
      out.insert(*t);
    }
    start = end + 1;
  }
  if (out.empty()) throw ConfigError("no analyzer selected");
  return out;
}

std::vector<std::string> read_repo_list(const fs::path& list_file) {
  std::ifstream in(list_file);
  if (!in) throw ConfigError("cannot read repository list " + list_file.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(t);
  }
  return out;
}

std::string classified_to_json(const ClassifiedWarning& cw) {
  const Warning& w = cw.warning;
  ordered_json j;
  j["repo"] = cw.pair.repo_url;
  j["chain_index"] = cw.pair.chain_index;
  j["parent_sha"] = cw.pair.parent.sha;
  j["parent_date"] = format_iso8601_utc(cw.pair.parent.commit_date_utc);
  j["commit_sha"] = cw.pair.child.sha;
  j["commit_date"] = format_iso8601_utc(cw.pair.child.commit_date_utc);
  j["tool"] = to_string(w.tool);
  j["rule_id"] = w.rule_id;
  j["category"] = w.category;
  j["message"] = w.message;
  j["file_path"] = w.file_path;
  j["positions"] = positions_json(w.span);
  j["label"] = to_string(cw.label);
  return dump(j);
}

ClassifiedWarning classified_from_json(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw DatasetError(std::string("malformed pair line: ") + e.what());
  }
  ClassifiedWarning cw;
  cw.pair.repo_url = get_field<std::string>(j, "repo");
  cw.pair.chain_index = get_field<std::size_t>(j, "chain_index");
  cw.pair.parent.sha = get_field<std::string>(j, "parent_sha");
  cw.pair.parent.commit_date_utc = get_time(j, "parent_date");
  cw.pair.child.sha = get_field<std::string>(j, "commit_sha");
  cw.pair.child.commit_date_utc = get_time(j, "commit_date");
  cw.pair.child.parent_shas = {cw.pair.parent.sha};
  const auto tool = parse_tool(get_field<std::string>(j, "tool"));
  if (!tool) throw DatasetError("unknown tool in pair line");
  cw.warning.tool = *tool;
  cw.warning.rule_id = get_field<std::string>(j, "rule_id");
  cw.warning.category = get_field<std::string>(j, "category");
  cw.warning.message = get_field<std::string>(j, "message");
  cw.warning.file_path = get_field<std::string>(j, "file_path");
  const auto span = parse_positions(get_field<std::string>(j, "positions"));
  if (!span) throw DatasetError("malformed positions in pair line");
  cw.warning.span = *span;
  cw.label = parse_label(get_field<std::string>(j, "label"));
  cw.observed_at_sha = cw.pair.parent.sha;
  return cw;
}

int cmd_mine(const RunConfig& config, std::ostream& log_stream) {
  Logger log(log_stream);
  try {
    validate_config(config);
    fs::create_directories(config.workdir);
    if (!config.out.empty()) fs::create_directories(config.out);
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return kExitFatal;
  }
  const fs::path manifest = (config.out.empty() ? config.workdir : config.out) / "manifest.jsonl";
  write_text(manifest, "");
  std::size_t failed = 0;
  for (const auto& url : config.repos) {
    if (!mine_repo(url, config, manifest, log)) ++failed;
  }
  log("mined " + std::to_string(config.repos.size() - failed) + " of " + std::to_string(config.repos.size()) +
      " repositories");
  return failed == 0 ? kExitOk : kExitPartial;
}

int cmd_feed(const fs::path& list_file, RunConfig config, std::ostream& log) {
  try {
    config.repos = read_repo_list(list_file);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFatal;
  }
  return cmd_mine(config, log);
}

fs::path dataset_file_name(DatasetFormat format) {
  return format == DatasetFormat::Columnar ? "dataset.parquet" : "dataset.jsonl";
}

int cmd_create_dataset(const CreateDatasetOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (!fs::is_directory(options.mined)) throw ConfigError("mined directory not found: " + options.mined.string());
    fs::create_directories(options.out);
    // Start from an empty archive so it matches the dataset exactly.
    fs::remove_all(options.out / "files");
    fs::remove(options.out / "files.zip");

    std::vector<LabeledRecord> records;
    for (const fs::path& repo_dir : sorted_entries(options.mined, true)) {
      if (!fs::exists(repo_dir / "repo.json")) continue;
      const json info = json::parse(read_text(repo_dir / "repo.json"));
      const std::string url = get_field<std::string>(info, "repo");
      const fs::path clone = get_field<std::string>(info, "clone");
      if (!fs::is_directory(clone)) throw ConfigError("clone of " + url + " not found at " + clone.string());
      const Repository repo(url, clone, "HEAD");

      std::vector<ClassifiedWarning> stream;
      for (const fs::path& pair_file : sorted_entries(repo_dir / "pairs", false)) {
        if (pair_file.extension() != ".jsonl") continue;
        const std::string text = read_text(pair_file);
        std::size_t line_no = 0;
        for (std::string_view line : split_lines(text)) {
          ++line_no;
          if (trim(line).empty()) continue;
          try {
            stream.push_back(classified_from_json(line));
          } catch (const DatasetError& e) {
            throw DatasetError(pair_file.string() + ":" + std::to_string(line_no) + ": " + e.what());
          }
        }
      }
      // Directory order is arbitrary; the chain index restores commit order.
      std::stable_sort(stream.begin(), stream.end(),
                       [](const auto& a, const auto& b) { return a.pair.chain_index < b.pair.chain_index; });
      const auto collapsed = dedupe_na_keep_last(std::move(stream));

      std::map<std::string, std::set<std::string>> wanted;
      for (const auto& cw : collapsed) wanted[cw.pair.parent.sha].insert(cw.warning.file_path);
      for (const auto& [sha, paths] : wanted) {
        const auto files = read_files_at(repo, sha, std::vector<std::string>(paths.begin(), paths.end()));
        for (const auto& [path, content] : files) archive_source(url, sha, path, content, options.out);
      }
      std::size_t a = 0;
      for (const auto& cw : collapsed) {
        records.push_back(to_record(cw));
        a += cw.label == Label::Actionable ? 1 : 0;
      }
      out << url << ": " << collapsed.size() << " records (" << a << " actionable, " << collapsed.size() - a
          << " non-actionable)\n";
    }

    std::size_t invalid = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto violations = validate_record(records[i], options.out);
      if (violations.empty()) continue;
      ++invalid;
      for (const auto& v : violations) {
        err << "record " << i << " (" << records[i].filename << " " << records[i].positions << "): " << v.field << ": "
            << v.message << '\n';
      }
    }
    if (invalid > 0) {
      err << "error: " << invalid << " invalid records; dataset not written\n";
      return kExitFatal;
    }

    const fs::path dataset = options.out / dataset_file_name(options.format);
    write_dataset(records, dataset, options.format);
    if (options.zip) pack_archive_zip(options.out, options.out / "files.zip");
    out << "total: " << records.size() << " records (" << count_label(records, 1) << " actionable, "
        << count_label(records, 0) << " non-actionable) -> " << dataset.string() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFatal;
  }
}

int cmd_dedup(const DedupOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const auto records = read_dataset(options.dataset);
    const fs::path root = options.archive_root.value_or(fs::absolute(options.dataset).parent_path());
    const std::size_t input = records.size();
    const DedupResult r = dedup_dataset(records, archive_loader(root), options.workers);
    write_dataset(r.kept, options.out, format_for_path(options.out));
    fs::path log_path = options.drop_log.value_or(fs::path(options.out.string() + ".drops.jsonl"));
    write_text(log_path, drop_log_jsonl(r.drop_log));
    for (const auto& f : r.flagged) err << "warning: record " << f.id << " kept unchecked: " << f.reason << '\n';
    out << "input " << input << ", kept " << r.kept.size() << ", dropped " << r.dropped_count << ", flagged "
        << r.flagged.size() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFatal;
  }
}

StatsKind parse_stats_kind(std::string_view s) {
  if (s == "category") return StatsKind::Category;
  if (s == "rules") return StatsKind::Rules;
  if (s == "projects") return StatsKind::Projects;
  throw ConfigError("unknown stats kind '" + std::string(s) + "' (expected category, rules or projects)");
}

StatsFormat parse_stats_format(std::string_view s) {
  if (s == "table") return StatsFormat::Table;
  if (s == "csv") return StatsFormat::Csv;
  if (s == "svg") return StatsFormat::Svg;
  throw ConfigError("unknown format '" + std::string(s) + "' (expected table, csv or svg)");
}

int cmd_stats(const fs::path& dataset, StatsKind kind, StatsFormat format, Tool tool, std::ostream& out) {
  const auto records = read_dataset(dataset);
  const std::string tool_name(to_string(tool));
  switch (kind) {
    case StatsKind::Category: {
      const auto rows = category_distribution(records, tool);
      if (format == StatsFormat::Csv) out << category_csv(rows);
      if (format == StatsFormat::Table) out << category_table(rows);
      if (format == StatsFormat::Svg) out << category_svg(rows, tool_name + " warnings by category");
      break;
    }
    case StatsKind::Rules: {
      const RuleUniverse& u = bundled_universe(tool);
      const auto c = rule_coverage_classes(records, u);
      if (format == StatsFormat::Csv) out << coverage_csv(c, u.size());
      if (format == StatsFormat::Table) out << coverage_table(c, u.size());
      if (format == StatsFormat::Svg) out << coverage_svg(c, u.size(), tool_name + " rule coverage");
      break;
    }
    case StatsKind::Projects: {
      const auto s = project_stats(records);
      if (format == StatsFormat::Csv) out << projects_csv(s);
      if (format == StatsFormat::Table) out << projects_table(s);
      if (format == StatsFormat::Svg) out << projects_svg(s, "Warnings per project");
      break;
    }
  }
  return kExitOk;
}

int cmd_sample(const SampleOptions& options, std::ostream& out, std::ostream& err) {
  try {
    std::vector<LabeledRecord> records;
    if (options.dataset) records = read_dataset(*options.dataset);
    std::int64_t population = options.population.value_or(static_cast<std::int64_t>(records.size()));
    if (!options.dataset && !options.population) throw ConfigError("either a dataset or --population is required");
    SampleSpec spec{population, options.z.value_or(z_for_confidence(options.confidence)), options.p_hat, options.margin};
    const std::int64_t n = cochran_sample_size(spec);
    SampleSpec rounded = spec;
    rounded.z = std::round(spec.z * 100.0) / 100.0;
    const std::int64_t n_rounded = cochran_sample_size(rounded);

    std::ostringstream zs;
    zs << spec.z;
    std::ostringstream zr;
    zr << rounded.z;
    out << "population: " << population << '\n';
    out << "z: " << zs.str() << " (confidence " << options.confidence << ")\n";
    out << "margin: " << options.margin << ", p_hat: " << options.p_hat << '\n';
    out << "sample size: " << n << '\n';
    out << "sample size with z rounded to two decimals (" << zr.str() << "): " << n_rounded << '\n';

    if (options.dataset) {
      const std::size_t size = options.size.value_or(static_cast<std::size_t>(n));
      const auto sample = draw_validation_sample(records, size, options.seed);
      if (options.out) {
        write_text(*options.out, sample_to_jsonl(sample));
        out << "sample of " << sample.size() << " records (seed " << options.seed << ") -> " << options.out->string()
            << '\n';
      } else {
        out << "sample of " << sample.size() << " records drawn (seed " << options.seed
            << "); pass --out to export it\n";
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFatal;
  }
}

}  // namespace nascar
