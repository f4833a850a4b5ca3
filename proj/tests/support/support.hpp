#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nascar/dataset.hpp"

namespace nascar::testing {

/// Directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& content);

/// Scripted git repository with fixed identities and dates.
class GitRepo {
 public:
  explicit GitRepo(std::filesystem::path dir);
  const std::filesystem::path& dir() const { return dir_; }

  /// Runs git in the repository; throws on failure. `date` sets both the
  /// author and committer date ("2023-01-01T10:00:00Z").
  std::string git(const std::vector<std::string>& args, const std::string& date = "2023-01-01T00:00:00Z");
  void write(const std::string& path, const std::string& content);
  void remove(const std::string& path);
  /// Stages everything and commits; returns the new sha.
  std::string commit(const std::string& message, const std::string& date);
  std::string head();

 private:
  std::filesystem::path dir_;
};

/// Builds the labeled history fixture (see tests/fixtures/history_labels.json)
/// under `dir`; returns commit tag -> sha.
std::map<std::string, std::string> build_history_fixture(const std::filesystem::path& dir);

/// A two-commit repository whose only pair fixes one SysOut warning.
std::map<std::string, std::string> build_small_fixture(const std::filesystem::path& dir);

/// Label facts as "<parent>-<child>|<A|NA>|<file>|<rule>|<start>|<end>",
/// commits named by fixture tag.
using LabelSet = std::set<std::string>;
/// Expected pair labels and dataset rows from tests/fixtures/history_labels.json.
LabelSet oracle_pair_labels();
LabelSet oracle_dataset_labels();
/// Pair labels written by a mine run of `url` under `workdir`.
LabelSet mined_pair_labels(const std::filesystem::path& workdir, const std::string& url,
                           const std::map<std::string, std::string>& tags);
LabelSet dataset_labels(const std::vector<LabeledRecord>& records, const std::map<std::string, std::string>& tags);

std::string random_sha(std::mt19937_64& rng);

/// Schema-valid records with random content; sources are written to
/// `archive_root` when given so validate_record passes.
std::vector<LabeledRecord> generate_records(std::size_t n, std::uint64_t seed,
                                            const std::optional<std::filesystem::path>& archive_root = std::nullopt);

/// One way of breaking a valid record; `field` is the column expected in the
/// resulting violation.
struct Mutation {
  std::string name;
  std::string field;
  std::function<void(LabeledRecord&)> apply;
};
std::vector<Mutation> record_mutations();

/// Runs the CLI binary; returns exit code and stdout/stderr.
struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};
CliResult run_cli(const std::vector<std::string>& args, const std::filesystem::path& cwd = {});

std::filesystem::path fixtures_dir();

}  // namespace nascar::testing
