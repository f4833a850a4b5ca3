#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nascar/analyzer.hpp"
#include "nascar/classifier.hpp"
#include "nascar/dataset.hpp"
#include "nascar/time.hpp"

namespace nascar {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitFatal = 2;

struct RunConfig {
  std::vector<std::string> repos;
  std::optional<Timestamp> since;
  /// Inclusive bounds on the committer date.
  std::optional<Timestamp> until;
  std::set<Tool> analyzers{Tool::Builtin};
  /// Per repository: `<workdir>/<repo_slug>/{repo,pairs,scratch}` and `repo.json`.
  /// Pair files are `pairs/<child_sha>.jsonl`.
  std::filesystem::path workdir = "work";
  /// Directory of `manifest.jsonl`; empty means the workdir.
  std::filesystem::path out;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  /// Name of the commit ranker; only "none" (keep every pair) exists.
  std::string commit_filter = "none";
  ExternalToolConfig tools;
};

/// Throws ConfigError when no analyzer is enabled, workers is 0, the window
/// is empty or the commit filter is unknown.
void validate_config(const RunConfig& config);

/// Parses "pmd,spotbugs,builtin" (any subset, any case). Throws ConfigError.
std::set<Tool> parse_analyzers(std::string_view list);

/// Non-blank lines that do not start with '#', trimmed.
std::vector<std::string> read_repo_list(const std::filesystem::path& list_file);

/// One line of a per-pair file.
std::string classified_to_json(const ClassifiedWarning& cw);
ClassifiedWarning classified_from_json(std::string_view line);

/// Mines every repository of `config.repos`. Per-repo failures are recorded
/// in the manifest and do not stop the others. Returns an exit status.
int cmd_mine(const RunConfig& config, std::ostream& log);

/// cmd_mine over the repositories listed in `list_file`.
int cmd_feed(const std::filesystem::path& list_file, RunConfig config, std::ostream& log);

struct CreateDatasetOptions {
  /// The workdir of a mine/feed run.
  std::filesystem::path mined;
  /// Receives the dataset file, `files/` and optionally `files.zip`.
  std::filesystem::path out;
  DatasetFormat format = DatasetFormat::Columnar;
  bool zip = false;
};

/// `dataset.parquet` or `dataset.jsonl`.
std::filesystem::path dataset_file_name(DatasetFormat format);

/// Collapses repeated non-actionable warnings per repository, archives the
/// parent snapshots, validates every record and writes the dataset. Nothing is
/// written when a record is invalid.
int cmd_create_dataset(const CreateDatasetOptions& options, std::ostream& out, std::ostream& err);

struct DedupOptions {
  std::filesystem::path dataset;
  std::filesystem::path out;
  /// Defaults to the dataset's directory.
  std::optional<std::filesystem::path> archive_root;
  /// Defaults to `<out>.drops.jsonl`.
  std::optional<std::filesystem::path> drop_log;
  unsigned workers = 1;
};

int cmd_dedup(const DedupOptions& options, std::ostream& out, std::ostream& err);

enum class StatsKind { Category, Rules, Projects };
enum class StatsFormat { Table, Csv, Svg };

/// Throws ConfigError for unknown names.
StatsKind parse_stats_kind(std::string_view s);
StatsFormat parse_stats_format(std::string_view s);

int cmd_stats(const std::filesystem::path& dataset, StatsKind kind, StatsFormat format, Tool tool, std::ostream& out);

struct SampleOptions {
  std::optional<std::filesystem::path> dataset;
  /// Used when no dataset is given, or to override its size.
  std::optional<std::int64_t> population;
  double confidence = 0.90;
  /// Overrides the value derived from the confidence level.
  std::optional<double> z;
  double margin = 0.10;
  double p_hat = 0.5;
  std::uint64_t seed = 0;
  /// Overrides the computed sample size for the drawn sample.
  std::optional<std::size_t> size;
  /// Sample export; stdout receives only the report when absent.
  std::optional<std::filesystem::path> out;
};

/// Reports the sample size for z and for z rounded to two decimals, and draws
/// the sample when a dataset is given.
int cmd_sample(const SampleOptions& options, std::ostream& out, std::ostream& err);

}  // namespace nascar
