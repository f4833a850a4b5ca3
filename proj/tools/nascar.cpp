// nascar: mine actionable/non-actionable static-analysis warnings from Git
// histories and turn them into a dataset.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nascar/errors.hpp"
#include "nascar/pipeline.hpp"

namespace {

using namespace nascar;

struct MineFlags {
  std::string since;
  std::string until;
  std::string analyzers = "builtin";
  std::string workdir = "work";
  std::string out;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  std::string commit_filter = "none";
  std::string pmd = "pmd";
  std::string spotbugs = "spotbugs";
};

void add_mine_flags(CLI::App* cmd, MineFlags& f) {
  cmd->add_option("--since", f.since, "First committer date to include (YYYY-MM-DD, UTC)");
  cmd->add_option("--until", f.until, "Last committer date to include (YYYY-MM-DD, UTC, whole day)");
  cmd->add_option("--analyzers", f.analyzers, "Comma-separated subset of pmd,spotbugs,builtin")->capture_default_str();
  cmd->add_option("--workdir", f.workdir, "Clones, per-pair files and scratch space")->capture_default_str();
  cmd->add_option("--out", f.out, "Directory for manifest.jsonl (default: the workdir)");
  cmd->add_option("--workers", f.workers, "Parallel commit pairs per repository")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Recorded for reproducibility; mining itself is deterministic")->capture_default_str();
  cmd->add_option("--commit-filter", f.commit_filter, "Commit ranker (only 'none')")->capture_default_str();
  cmd->add_option("--pmd", f.pmd, "PMD launcher")->capture_default_str();
  cmd->add_option("--spotbugs", f.spotbugs, "SpotBugs launcher")->capture_default_str();
}

RunConfig to_config(const MineFlags& f) {
  RunConfig c;
  if (!f.since.empty()) {
    c.since = parse_date(f.since);
    if (!c.since) throw ConfigError("--since must be YYYY-MM-DD");
  }
  if (!f.until.empty()) {
    const auto d = parse_date(f.until);
    if (!d) throw ConfigError("--until must be YYYY-MM-DD");
    c.until = *d + std::chrono::days{1} - std::chrono::seconds{1};
  }
  c.analyzers = parse_analyzers(f.analyzers);
  c.workdir = f.workdir;
  c.out = f.out;
  c.workers = f.workers;
  c.seed = f.seed;
  c.commit_filter = f.commit_filter;
  c.tools.pmd_command = {f.pmd};
  c.tools.spotbugs_command = {f.spotbugs};
  validate_config(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build a dataset of actionable and non-actionable static-analysis warnings from Git histories"};
  app.require_subcommand(1);

  MineFlags mine_flags;
  std::vector<std::string> mine_repos;
  auto* mine = app.add_subcommand("mine", "Mine one or more repositories");
  mine->add_option("repos", mine_repos, "Repository URLs or paths")->required();
  add_mine_flags(mine, mine_flags);

  MineFlags feed_flags;
  std::string list_file;
  auto* feed = app.add_subcommand("feed", "Mine every repository listed in a file");
  feed->add_option("list", list_file, "One repository per line; blank lines and # comments are ignored")->required();
  add_mine_flags(feed, feed_flags);

  CreateDatasetOptions create;
  std::string create_mined;
  std::string create_out = "dataset";
  std::string create_format = "parquet";
  auto* create_cmd = app.add_subcommand("create-dataset", "Assemble the dataset and source archive from mined pairs");
  create_cmd->add_option("mined", create_mined, "Workdir of a mine/feed run")->required();
  create_cmd->add_option("--out", create_out, "Output directory")->capture_default_str();
  create_cmd->add_option("--format", create_format, "parquet or jsonl")
      ->check(CLI::IsMember({"parquet", "jsonl"}))
      ->capture_default_str();
  create_cmd->add_flag("--zip", create.zip, "Also pack files/ into files.zip");

  DedupOptions dedup;
  std::string dedup_in;
  std::string dedup_out;
  std::string dedup_archive;
  std::string dedup_log;
  auto* dedup_cmd = app.add_subcommand("dedup", "Drop near-duplicate warnings by code context");
  dedup_cmd->add_option("dataset", dedup_in, "Dataset file")->required();
  dedup_cmd->add_option("--out", dedup_out, "Deduplicated dataset (.parquet or .jsonl)")->required();
  dedup_cmd->add_option("--archive", dedup_archive, "Archive root holding files/ (default: the dataset's directory)");
  dedup_cmd->add_option("--drop-log", dedup_log, "Drop log path (default: <out>.drops.jsonl)");
  dedup_cmd->add_option("--workers", dedup.workers, "Threads for signature computation")->capture_default_str();

  std::string stats_in;
  std::string stats_kind = "projects";
  std::string stats_format = "table";
  std::string stats_tool = "pmd";
  std::string stats_out;
  auto* stats_cmd = app.add_subcommand("stats", "Summary tables and charts");
  stats_cmd->add_option("dataset", stats_in, "Dataset file")->required();
  stats_cmd->add_option("--kind", stats_kind, "category, rules or projects")->capture_default_str();
  stats_cmd->add_option("--format", stats_format, "table, csv or svg")->capture_default_str();
  stats_cmd->add_option("--tool", stats_tool, "pmd, spotbugs or builtin (category and rules)")->capture_default_str();
  stats_cmd->add_option("--out", stats_out, "Write to a file instead of stdout");

  SampleOptions sample;
  std::string sample_in;
  std::string sample_out;
  std::optional<std::int64_t> sample_population;
  std::optional<double> sample_z;
  std::optional<std::size_t> sample_size;
  auto* sample_cmd = app.add_subcommand("sample", "Sample size for manual validation and a seeded random sample");
  sample_cmd->add_option("dataset", sample_in, "Dataset file (optional with --population)");
  sample_cmd->add_option("--population", sample_population, "Population size when no dataset is given");
  sample_cmd->add_option("--confidence", sample.confidence, "Confidence level")->capture_default_str();
  sample_cmd->add_option("--z", sample_z, "z-score (overrides --confidence)");
  sample_cmd->add_option("--margin", sample.margin, "Margin of error")->capture_default_str();
  sample_cmd->add_option("--p-hat", sample.p_hat, "Estimated proportion")->capture_default_str();
  sample_cmd->add_option("--size", sample_size, "Draw this many records instead of the computed size");
  sample_cmd->add_option("--seed", sample.seed, "Sampling seed")->capture_default_str();
  sample_cmd->add_option("--out", sample_out, "Sample export (JSON lines)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (*mine) {
      RunConfig c = to_config(mine_flags);
      c.repos = mine_repos;
      return cmd_mine(c, std::cerr);
    }
    if (*feed) return cmd_feed(list_file, to_config(feed_flags), std::cerr);
    if (*create_cmd) {
      create.mined = create_mined;
      create.out = create_out;
      create.format = create_format == "jsonl" ? DatasetFormat::Jsonl : DatasetFormat::Columnar;
      return cmd_create_dataset(create, std::cout, std::cerr);
    }
    if (*dedup_cmd) {
      dedup.dataset = dedup_in;
      dedup.out = dedup_out;
      if (!dedup_archive.empty()) dedup.archive_root = dedup_archive;
      if (!dedup_log.empty()) dedup.drop_log = dedup_log;
      if (dedup.workers < 1) throw ConfigError("--workers must be at least 1");
      return cmd_dedup(dedup, std::cout, std::cerr);
    }
    if (*stats_cmd) {
      const StatsKind kind = parse_stats_kind(stats_kind);
      const StatsFormat format = parse_stats_format(stats_format);
      const auto tool = parse_tool(stats_tool);
      if (!tool) throw ConfigError("unknown tool '" + stats_tool + "'");
      if (stats_out.empty()) return cmd_stats(stats_in, kind, format, *tool, std::cout);
      std::ofstream out(stats_out, std::ios::binary | std::ios::trunc);
      if (!out) throw ConfigError("cannot write " + stats_out);
      return cmd_stats(stats_in, kind, format, *tool, out);
    }
    if (*sample_cmd) {
      if (!sample_in.empty()) sample.dataset = sample_in;
      if (!sample_out.empty()) sample.out = sample_out;
      sample.population = sample_population;
      sample.z = sample_z;
      sample.size = sample_size;
      return cmd_sample(sample, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFatal;
  }
  return kExitFatal;
}
