#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nascar/diff.hpp"
#include "nascar/time.hpp"

namespace nascar {

struct CommitMeta {
  std::string sha;
  Timestamp commit_date_utc{};
  /// First element is the first parent; empty for a root commit.
  std::vector<std::string> parent_shas;

  bool is_root() const noexcept { return parent_shas.empty(); }
  friend bool operator==(const CommitMeta&, const CommitMeta&) = default;
};

/// A child commit and its first parent: the unit of differential analysis.
struct CommitPair {
  std::string repo_url;
  CommitMeta parent;
  CommitMeta child;
  /// Position of the child in the first-parent chain listing (oldest = 0).
  std::size_t chain_index = 0;

  friend bool operator==(const CommitPair&, const CommitPair&) = default;
};

/// A local clone. Commands are read-only apart from clone/fetch, so one
/// handle may be shared between threads.
class Repository {
 public:
  Repository(std::string url, std::filesystem::path dir, std::string main_ref)
      : url_(std::move(url)), dir_(std::move(dir)), main_ref_(std::move(main_ref)) {}

  const std::string& url() const noexcept { return url_; }
  const std::filesystem::path& dir() const noexcept { return dir_; }
  /// The ref naming the default branch, normally `refs/remotes/origin/HEAD`.
  const std::string& main_ref() const noexcept { return main_ref_; }

  /// Resolves a revision to a full sha.
  std::string resolve(std::string_view rev) const;

  CommitMeta commit_meta(std::string_view sha) const;

  /// Repo-relative paths of all `.java` blobs at a commit, sorted.
  std::vector<std::string> list_java_files(std::string_view sha) const;

 private:
  std::string url_;
  std::filesystem::path dir_;
  std::string main_ref_;
};

/// Clones `url` into `workdir`, or fetches when `workdir` already holds a clone of it.
/// Throws GitError on failure.
Repository clone_repo(std::string_view url, const std::filesystem::path& workdir);

/// First-parent chain of the default branch, oldest first, restricted to
/// committer dates (UTC) within [since, until].
std::vector<CommitMeta> list_main_commits(const Repository& repo, std::optional<Timestamp> since = std::nullopt,
                                          std::optional<Timestamp> until = std::nullopt);

/// One pair per non-root commit; the parent is always the first parent, even
/// when it lies outside the listed window.
std::vector<CommitPair> make_pairs(const std::vector<CommitMeta>& commits, const Repository& repo);

/// Zero-context, rename-free diff of the pair restricted to `.java` paths.
std::vector<FileDiff> diff_java_changes(const Repository& repo, const CommitPair& pair);

/// Content of `path` at `sha`, lossily decoded as UTF-8. Throws NotFoundError.
std::string read_file_at(const Repository& repo, std::string_view sha, std::string_view path);

/// Batch variant of read_file_at; a single git process serves all paths.
/// Missing paths are absent from the result.
std::map<std::string, std::string> read_files_at(const Repository& repo, std::string_view sha,
                                                  const std::vector<std::string>& paths);

/// Writes the tree of `sha` into `dest` (created if needed) without touching
/// the clone's own checkout.
void export_tree(const Repository& repo, std::string_view sha, const std::filesystem::path& dest);

}  // namespace nascar
