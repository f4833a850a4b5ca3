#include "nascar/repo.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_map>

#include "git.hpp"
#include "nascar/errors.hpp"
#include "nascar/text.hpp"

namespace fs = std::filesystem;

namespace nascar {

namespace detail {

ProcessResult git(const fs::path& dir, std::vector<std::string> args, std::string input) {
  std::vector<std::string> argv{"git"};
  if (!dir.empty()) {
    argv.push_back("-C");
    argv.push_back(dir.string());
  }
  for (const char* c : {"core.quotepath=false", "core.autocrlf=false", "diff.noprefix=false", "log.showSignature=false"}) {
    argv.push_back("-c");
    argv.push_back(c);
  }
  argv.insert(argv.end(), std::make_move_iterator(args.begin()), std::make_move_iterator(args.end()));
  ProcessOptions opts;
  opts.input = std::move(input);
  opts.env = {{"LC_ALL", "C"}, {"GIT_TERMINAL_PROMPT", "0"}, {"GIT_ASKPASS", "true"}};
  return run_process(argv, opts);
}

std::string git_checked(const fs::path& dir, std::vector<std::string> args, std::string input) {
  std::string what = args.empty() ? "" : args.front();
  ProcessResult r = git(dir, std::move(args), std::move(input));
  if (!r.ok()) {
    throw GitError("git " + what + " failed in " + dir.string() + " (exit " + std::to_string(r.exit_code) +
                   "): " + std::string(trim(r.err)));
  }
  return std::move(r.out);
}

}  // namespace detail

using detail::git;
using detail::git_checked;

namespace {

constexpr std::string_view kMetaFormat = "--format=%H %ct %P";

CommitMeta parse_meta_line(std::string_view line) {
  std::istringstream in{std::string(line)};
  CommitMeta m;
  long long ct = 0;
  in >> m.sha >> ct;
  if (!in || !is_sha1_hex(m.sha)) throw GitError("unexpected commit line: " + std::string(line));
  m.commit_date_utc = Timestamp{std::chrono::seconds{ct}};
  std::string p;
  while (in >> p) m.parent_shas.push_back(p);
  return m;
}

bool is_clone_of(const fs::path& dir, std::string_view url) {
  if (!fs::exists(dir / ".git") && !fs::exists(dir / "HEAD")) return false;
  const ProcessResult r = git(dir, {"config", "--get", "remote.origin.url"});
  return r.ok() && trim(r.out) == url;
}

std::string detect_main_ref(const fs::path& dir) {
  if (git(dir, {"rev-parse", "--verify", "--quiet", "refs/remotes/origin/HEAD^{commit}"}).ok()) {
    return "refs/remotes/origin/HEAD";
  }
  return "HEAD";
}

}  // namespace

std::string Repository::resolve(std::string_view rev) const {
  return std::string(trim(git_checked(dir_, {"rev-parse", "--verify", std::string(rev) + "^{commit}"})));
}

CommitMeta Repository::commit_meta(std::string_view sha) const {
  const std::string out = git_checked(dir_, {"log", "-1", "--no-color", std::string(kMetaFormat), std::string(sha)});
  return parse_meta_line(trim(out));
}

std::vector<std::string> Repository::list_java_files(std::string_view sha) const {
  const std::string out = git_checked(dir_, {"ls-tree", "-r", "-z", "--name-only", std::string(sha)});
  std::vector<std::string> files;
  std::size_t start = 0;
  while (start < out.size()) {
    std::size_t end = out.find('\0', start);
    if (end == std::string::npos) end = out.size();
    std::string_view path(out.data() + start, end - start);
    if (ends_with_java(path)) files.emplace_back(path);
    start = end + 1;
  }
  std::sort(files.begin(), files.end());
  return files;
}

Repository clone_repo(std::string_view url, const fs::path& workdir) {
  if (is_clone_of(workdir, url)) {
    git_checked(workdir, {"fetch", "--quiet", "--prune", "origin"});
    git(workdir, {"remote", "set-head", "origin", "--auto"});
    return Repository(std::string(url), workdir, detect_main_ref(workdir));
  }
  if (fs::exists(workdir) && !fs::is_empty(workdir)) {
    throw GitError("clone target " + workdir.string() + " exists and is not a clone of " + std::string(url));
  }
  fs::create_directories(workdir.parent_path().empty() ? fs::path(".") : workdir.parent_path());
  git_checked({}, {"clone", "--quiet", "--no-checkout", std::string(url), workdir.string()});
  return Repository(std::string(url), workdir, detect_main_ref(workdir));
}

std::vector<CommitMeta> list_main_commits(const Repository& repo, std::optional<Timestamp> since,
                                          std::optional<Timestamp> until) {
  // An empty repository has no commit on its default branch.
  if (!git(repo.dir(), {"rev-parse", "--verify", "--quiet", repo.main_ref() + "^{commit}"}).ok()) return {};
  const std::string out =
      git_checked(repo.dir(), {"log", "--first-parent", "--no-color", std::string(kMetaFormat), repo.main_ref(), "--"});
  std::vector<CommitMeta> commits;
  for (const std::string_view line : split_lines(out)) {
    if (trim(line).empty()) continue;
    CommitMeta m = parse_meta_line(line);
    if (since && m.commit_date_utc < *since) continue;
    if (until && m.commit_date_utc > *until) continue;
    commits.push_back(std::move(m));
  }
  std::reverse(commits.begin(), commits.end());
  return commits;
}

std::vector<CommitPair> make_pairs(const std::vector<CommitMeta>& commits, const Repository& repo) {
  std::unordered_map<std::string_view, const CommitMeta*> by_sha;
  for (const auto& c : commits) by_sha.emplace(c.sha, &c);

  std::vector<CommitPair> pairs;
  for (std::size_t i = 0; i < commits.size(); ++i) {
    const CommitMeta& child = commits[i];
    if (child.is_root()) continue;
    const std::string& first_parent = child.parent_shas.front();
    const auto it = by_sha.find(first_parent);
    CommitMeta parent = it != by_sha.end() ? *it->second : repo.commit_meta(first_parent);
    pairs.push_back(CommitPair{repo.url(), std::move(parent), child, i});
  }
  return pairs;
}

std::vector<FileDiff> diff_java_changes(const Repository& repo, const CommitPair& pair) {
  const std::string out = git_checked(repo.dir(), {"diff", "--no-color", "--no-ext-diff", "--no-renames", "-U0",
                                                   "--diff-algorithm=myers", "--src-prefix=a/", "--dst-prefix=b/",
                                                   pair.parent.sha, pair.child.sha, "--"});
  return filter_java(parse_unified_diff(out));
}

std::string read_file_at(const Repository& repo, std::string_view sha, std::string_view path) {
  const ProcessResult r = git(repo.dir(), {"cat-file", "blob", std::string(sha) + ":" + std::string(path)});
  if (!r.ok()) throw NotFoundError(std::string(path) + " not found at " + std::string(sha));
  return to_valid_utf8(r.out);
}

std::map<std::string, std::string> read_files_at(const Repository& repo, std::string_view sha,
                                                  const std::vector<std::string>& paths) {
  std::map<std::string, std::string> files;
  std::vector<const std::string*> requested;
  std::string input;
  for (const auto& p : paths) {
    if (p.find('\n') != std::string::npos) continue;
    input += std::string(sha) + ":" + p + "\n";
    requested.push_back(&p);
  }
  if (requested.empty()) return files;
  const std::string out = git_checked(repo.dir(), {"cat-file", "--batch"}, std::move(input));

  // Each answer is "<oid> <type> <size>\n<content>\n" or "<name> missing\n".
  std::size_t pos = 0;
  for (const std::string* path : requested) {
    const std::size_t eol = out.find('\n', pos);
    if (eol == std::string::npos) throw GitError("truncated cat-file --batch output");
    const std::string_view header(out.data() + pos, eol - pos);
    pos = eol + 1;
    if (header.ends_with(" missing") || header.ends_with(" ambiguous")) continue;
    const auto sp = header.rfind(' ');
    std::size_t size = 0;
    std::from_chars(header.data() + sp + 1, header.data() + header.size(), size);
    if (header.find(" blob ") != std::string_view::npos) {
      files.emplace(*path, to_valid_utf8(std::string_view(out).substr(pos, size)));
    }
    pos += size + 1;
  }
  return files;
}

}  // namespace nascar

namespace nascar {

void export_tree(const Repository& repo, std::string_view sha, const fs::path& dest) {
  std::error_code ec;
  fs::create_directories(dest, ec);
  if (ec) throw GitError("cannot create " + dest.string() + ": " + ec.message());
  std::string tar = git_checked(repo.dir(), {"archive", "--format=tar", std::string(sha)});
  ProcessOptions opts;
  opts.input = std::move(tar);
  const ProcessResult r = run_process(std::vector<std::string>{"tar", "-x", "-f", "-", "-C", dest.string()}, opts);
  if (!r.ok()) throw GitError("extracting " + std::string(sha) + " failed: " + std::string(trim(r.err)));
}

}  // namespace nascar
