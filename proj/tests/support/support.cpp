#include "support/support.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "nascar/pipeline.hpp"
#include "nascar/process.hpp"
#include "nascar/rules.hpp"
#include "nascar/time.hpp"

namespace fs = std::filesystem;

namespace nascar::testing {

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "nascar-test-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

GitRepo::GitRepo(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
  git({"init", "--quiet", "--initial-branch=main"});
}

std::string GitRepo::git(const std::vector<std::string>& args, const std::string& date) {
  std::vector<std::string> argv{"git", "-C", dir_.string(), "-c", "user.name=Fixture", "-c",
                                "user.email=fixture@example.org", "-c", "commit.gpgsign=false"};
  argv.insert(argv.end(), args.begin(), args.end());
  ProcessOptions opts;
  opts.env = {{"GIT_AUTHOR_DATE", date}, {"GIT_COMMITTER_DATE", date}, {"LC_ALL", "C"}};
  const ProcessResult r = run_process(argv, opts);
  if (!r.ok()) throw std::runtime_error("git " + args.front() + " failed: " + r.err);
  return r.out;
}

void GitRepo::write(const std::string& path, const std::string& content) { write_file(dir_ / path, content); }

void GitRepo::remove(const std::string& path) { fs::remove(dir_ / path); }

std::string GitRepo::commit(const std::string& message, const std::string& date) {
  git({"add", "-A"}, date);
  git({"commit", "--quiet", "--allow-empty", "-m", message}, date);
  return head();
}

std::string GitRepo::head() {
  std::string sha = git({"rev-parse", "HEAD"});
  while (!sha.empty() && (sha.back() == '\n' || sha.back() == '\r')) sha.pop_back();
  return sha;
}

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

const std::string kLongComment = "  // " + std::string(125, 'x');

}  // namespace

std::map<std::string, std::string> build_history_fixture(const fs::path& dir) {
  GitRepo repo(dir);
  std::map<std::string, std::string> sha;

  repo.write("README.md", "fixture\n");
  repo.write("src/A.java", join({"package demo;", "", "public class A {", "  void run(int x) {",
                                 "    System.out.println(x);", "  }", "", "  void safe() {", "    try {",
                                 "      load();", "    } catch (Exception e) {", "    }", "  }", "",
                                 "  void load() throws Exception {}", "}"}));
  repo.write("src/B.java",
             join({"package demo;", "", "public class B {", "  void run(int y) {", "    System.out.println(y);", "  }", "}"}));
  sha["c1"] = repo.commit("c1: initial import", "2023-01-01T10:00:00Z");

  // Removes the SysOut call on line 5.
  repo.write("src/A.java", join({"package demo;", "", "public class A {", "  void run(int x) {", "  }", "",
                                 "  void safe() {", "    try {", "      load();", "    } catch (Exception e) {", "    }",
                                 "  }", "", "  void load() throws Exception {}", "}"}));
  sha["c2"] = repo.commit("c2: drop println", "2023-01-02T10:00:00Z");

  repo.write("README.md", "fixture\nno java here\n");
  sha["c3"] = repo.commit("c3: docs only", "2023-01-03T10:00:00Z");

  // Pure insertion inside the empty catch block.
  repo.write("src/A.java", join({"package demo;", "", "public class A {", "  void run(int x) {", "  }", "",
                                 "  void safe() {", "    try {", "      load();", "    } catch (Exception e) {",
                                 "      log(e);", "    }", "  }", "", "  void load() throws Exception {}", "}"}));
  sha["c4"] = repo.commit("c4: handle exception", "2023-01-04T10:00:00Z");

  repo.write("src/C.java", join({"package demo;", "", "public class C {", kLongComment,
                                 "  void p(int z) { System.out.println(z); }", "}"}));
  sha["c5"] = repo.commit("c5: add C", "2023-01-05T10:00:00Z");

  repo.git({"checkout", "--quiet", "-b", "side"});
  repo.write("src/B.java", join({"package demo;", "", "public class B {", "  void run(int y) {", "  }", "}"}));
  sha["s1"] = repo.commit("s1: fix B on a side branch", "2023-01-06T10:00:00Z");
  repo.git({"checkout", "--quiet", "main"});

  repo.write("src/A.java", join({"package demo;", "// touched", "", "public class A {", "  void run(int x) {", "  }",
                                 "", "  void safe() {", "    try {", "      load();", "    } catch (Exception e) {",
                                 "      log(e);", "    }", "  }", "", "  void load() throws Exception {}", "}"}));
  sha["c6"] = repo.commit("c6: touch A", "2023-01-07T10:00:00Z");

  repo.git({"merge", "--quiet", "--no-ff", "--no-edit", "-m", "c7: merge side", "side"}, "2023-01-08T10:00:00Z");
  sha["c7"] = repo.head();

  repo.remove("src/C.java");
  sha["c8"] = repo.commit("c8: delete C", "2023-01-09T10:00:00Z");

  repo.write("src/D.java", join({"package demo;", "", "public class D {", "  void a(int v) {",
                                 "    System.out.println(v);", "  }", "  void b(int v) {", "    System.out.println(v);",
                                 "  }", "}"}));
  sha["c9"] = repo.commit("c9: add D", "2023-01-10T10:00:00Z");

  repo.write("src/D.java", join({"package demo;", "", "public class D {", "  void a(int v) {", "  }",
                                 "  void b(int v) {", "    System.out.println(v);", "  }", "}"}));
  sha["c10"] = repo.commit("c10: fix one of two", "2023-01-11T10:00:00Z");
  return sha;
}

std::map<std::string, std::string> build_small_fixture(const fs::path& dir) {
  GitRepo repo(dir);
  std::map<std::string, std::string> sha;
  repo.write("E.java", join({"class E {", "  void f() {", "    System.out.println(1);", "  }", "}"}));
  sha["e1"] = repo.commit("e1", "2023-02-01T00:00:00Z");
  repo.write("E.java", join({"class E {", "  void f() {", "  }", "}"}));
  sha["e2"] = repo.commit("e2", "2023-02-02T00:00:00Z");
  return sha;
}

namespace {

std::string label_fact(const std::string& pair, bool actionable, const std::string& file, const std::string& rule,
                       int start, int end) {
  return pair + "|" + (actionable ? "A" : "NA") + "|" + file + "|" + rule + "|" + std::to_string(start) + "|" +
         std::to_string(end);
}

nlohmann::json load_oracle() { return nlohmann::json::parse(read_file(fixtures_dir() / "history_labels.json")); }

std::string tag_of(const std::map<std::string, std::string>& tags, const std::string& sha) {
  for (const auto& [tag, s] : tags) {
    if (s == sha) return tag;
  }
  return sha;
}

}  // namespace

LabelSet oracle_pair_labels() {
  LabelSet out;
  const auto oracle = load_oracle();
  for (const auto& p : oracle["pairs"]) {
    const std::string pair = p["parent"].get<std::string>() + "-" + p["child"].get<std::string>();
    for (const char* kind : {"actionable", "non_actionable"}) {
      if (!p.contains(kind)) continue;
      for (const auto& w : p[kind]) {
        out.insert(label_fact(pair, std::string(kind) == "actionable", w["file"], w["rule"], w["start"], w["end"]));
      }
    }
  }
  return out;
}

LabelSet oracle_dataset_labels() {
  LabelSet out;
  const auto oracle = load_oracle();
  for (const auto& w : oracle["dataset"]) {
    out.insert(label_fact(w["pair"], w["label"] == 1, w["file"], w["rule"], w["start"], w["end"]));
  }
  return out;
}

LabelSet mined_pair_labels(const fs::path& workdir, const std::string& url, const std::map<std::string, std::string>& tags) {
  LabelSet out;
  const fs::path dir = workdir / repo_slug(url) / "pairs";
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::istringstream in(read_file(e.path()));
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      const ClassifiedWarning cw = classified_from_json(line);
      out.insert(label_fact(tag_of(tags, cw.pair.parent.sha) + "-" + tag_of(tags, cw.pair.child.sha),
                            cw.label == Label::Actionable, cw.warning.file_path, cw.warning.rule_id,
                            cw.warning.span.start_line, cw.warning.span.end_line));
    }
  }
  return out;
}

LabelSet dataset_labels(const std::vector<LabeledRecord>& records, const std::map<std::string, std::string>& tags) {
  LabelSet out;
  for (const auto& r : records) {
    const auto span = parse_positions(r.positions).value_or(Span{});
    out.insert(label_fact(tag_of(tags, r.parent_sha) + "-" + tag_of(tags, r.commit_sha), r.label == 1, r.filename,
                          r.warning_type, span.start_line, span.end_line));
  }
  return out;
}

std::string random_sha(std::mt19937_64& rng) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s(40, '0');
  for (char& c : s) c = kHex[rng() % 16];
  return s;
}

std::vector<LabeledRecord> generate_records(std::size_t n, std::uint64_t seed, const std::optional<fs::path>& archive_root) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> repos{"https://github.com/acme/alpha", "https://github.com/acme/beta.git",
                                       "https://gitlab.example.org/group/sub/gamma"};
  const std::vector<std::string> messages{"Avoid unused local variables such as 'x'.",
                                          "Line is longer than 120 characters",
                                          "Possible null pointer dereference in \"m\" \\ path",
                                          "Unicode \xc3\xa9\xe2\x82\xac \xf0\x9f\x90\x9b message",
                                          "Multi\nline\tmessage, with, commas"};
  const Tool tools[] = {Tool::Pmd, Tool::SpotBugs, Tool::Builtin};
  std::vector<LabeledRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    LabeledRecord r;
    const Tool tool = tools[rng() % 3];
    const auto& rules = bundled_universe(tool).rule_ids;
    auto it = rules.begin();
    std::advance(it, static_cast<long>(rng() % rules.size()));
    r.tool = std::string(to_string(tool));
    r.warning_type = *it;
    r.warning_msg = messages[rng() % messages.size()] + " #" + std::to_string(rng() % 1000);
    r.parent_sha = random_sha(rng);
    r.commit_sha = random_sha(rng);
    const auto base = Timestamp{std::chrono::seconds{1'500'000'000 + static_cast<long long>(rng() % 200'000'000)}};
    r.parent_date = format_iso8601_utc(base);
    r.commit_date = format_iso8601_utc(base + std::chrono::seconds{rng() % 1'000'000});
    r.repo = repos[rng() % repos.size()];
    r.filename = "src/main/java/p" + std::to_string(rng() % 5) + "/F" + std::to_string(rng() % 50) + ".java";
    Span s;
    s.start_line = 1 + static_cast<int>(rng() % 40);
    s.end_line = s.start_line + static_cast<int>(rng() % 4);
    if (rng() % 2 == 0) {
      s.start_col = 1 + static_cast<int>(rng() % 30);
      s.end_col = 1 + static_cast<int>(rng() % 80);
    }
    r.positions = positions_json(s);
    r.filepath = archive_relative_path(r.repo, r.parent_sha, r.filename);
    r.label = static_cast<std::int64_t>(rng() % 2);
    if (archive_root) {
      std::string content;
      for (int line = 1; line <= 50; ++line) content += "line " + std::to_string(line) + " of " + r.filename + "\n";
      archive_source(r.repo, r.parent_sha, r.filename, content, *archive_root);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Mutation> record_mutations() {
  using R = LabeledRecord&;
  return {
      {"unknown tool", "tool", [](R r) { r.tool = "Checkstyle"; }},
      {"empty tool", "tool", [](R r) { r.tool.clear(); }},
      {"empty rule", "warning_type", [](R r) { r.warning_type.clear(); }},
      {"empty message", "warning_msg", [](R r) { r.warning_msg.clear(); }},
      {"short parent sha", "parent_sha", [](R r) { r.parent_sha.pop_back(); }},
      {"upper-case parent sha", "parent_sha", [](R r) { r.parent_sha[0] = 'G'; }},
      {"short commit sha", "commit_sha", [](R r) { r.commit_sha = "abc123"; }},
      {"non-UTC parent date", "parent_date", [](R r) { r.parent_date = "2020-01-01T00:00:00+01:00"; }},
      {"date only", "commit_date", [](R r) { r.commit_date = "2020-01-01"; }},
      {"parent after child", "parent_date", [](R r) { r.parent_date = "2099-01-01T00:00:00Z"; }},
      {"empty repo", "repo", [](R r) { r.repo.clear(); }},
      {"absolute filename", "filename", [](R r) { r.filename = "/etc/passwd"; }},
      {"dotdot filename", "filename", [](R r) { r.filename = "src/../../x.java"; }},
      {"positions not json", "positions", [](R r) { r.positions = "line 3"; }},
      {"positions end before start", "positions", [](R r) { r.positions = R"({"startLine":5,"endLine":4})"; }},
      {"positions zero line", "positions", [](R r) { r.positions = R"({"startLine":0,"endLine":1})"; }},
      {"positions extra key", "positions", [](R r) { r.positions = R"({"startLine":1,"endLine":1,"x":1})"; }},
      {"label two", "label", [](R r) { r.label = 2; }},
      {"label negative", "label", [](R r) { r.label = -1; }},
      {"dangling filepath", "filepath", [](R r) { r.filepath += ".missing"; }},
      {"escaping filepath", "filepath", [](R r) { r.filepath = "files/../../etc/passwd"; }},
      {"filepath at wrong sha", "filepath",
       [](R r) { r.filepath = archive_relative_path(r.repo, std::string(40, '0'), r.filename); }},
  };
}

CliResult run_cli(const std::vector<std::string>& args, const fs::path& cwd) {
  std::vector<std::string> argv{NASCAR_CLI_PATH};
  argv.insert(argv.end(), args.begin(), args.end());
  ProcessOptions opts;
  opts.cwd = cwd;
  const ProcessResult r = run_process(argv, opts);
  return {r.exit_code, r.out, r.err};
}

fs::path fixtures_dir() { return NASCAR_FIXTURES_DIR; }

}  // namespace nascar::testing
