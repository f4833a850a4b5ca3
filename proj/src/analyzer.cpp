#include "nascar/analyzer.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "nascar/errors.hpp"
#include "nascar/process.hpp"
#include "nascar/text.hpp"
#include "xml.hpp"

namespace fs = std::filesystem;

namespace nascar {

using detail::XmlElement;

std::string_view to_string(Tool tool) noexcept {
  switch (tool) {
    case Tool::Pmd: return "PMD";
    case Tool::SpotBugs: return "SpotBugs";
    case Tool::Builtin: return "Builtin";
  }
  return "?";
}

std::optional<Tool> parse_tool(std::string_view s) noexcept {
  if (s == "PMD" || s == "pmd") return Tool::Pmd;
  if (s == "SpotBugs" || s == "spotbugs") return Tool::SpotBugs;
  if (s == "Builtin" || s == "builtin") return Tool::Builtin;
  return std::nullopt;
}

namespace {

std::optional<int> int_attr(const XmlElement& el, std::string_view key) {
  const std::string* v = el.attr(key);
  if (!v) return std::nullopt;
  const std::string_view s = trim(*v);
  int out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size() || out < 1) return std::nullopt;
  return out;
}

std::string normalize_separators(std::string p) {
  std::replace(p.begin(), p.end(), '\\', '/');
  while (p.starts_with("./")) p.erase(0, 2);
  return p;
}

// Strips `root` from an absolute path; leaves paths outside the root untouched.
std::string relativize(std::string path, std::string_view root) {
  path = normalize_separators(std::move(path));
  std::string r = normalize_separators(std::string(root));
  while (r.size() > 1 && r.back() == '/') r.pop_back();
  if (!r.empty() && path.size() > r.size() && path.starts_with(r) && path[r.size()] == '/') {
    path.erase(0, r.size() + 1);
  }
  return path;
}

Span make_span(int begin, std::optional<int> end, std::optional<int> bcol, std::optional<int> ecol) {
  Span s;
  s.start_line = begin;
  s.end_line = std::max(begin, end.value_or(begin));
  s.start_col = bcol;
  s.end_col = ecol;
  return s;
}

}  // namespace

Report parse_pmd_report(std::string_view xml, std::string commit_sha, const PathMapping& paths,
                        std::string_view source_name) {
  const XmlElement root = detail::parse_xml(xml, source_name);
  if (root.name != "pmd") {
    throw ReportParseError(std::string(source_name), root.line, root.column, "expected <pmd> root, found <" + root.name + ">");
  }
  Report report;
  report.commit_sha = std::move(commit_sha);
  for (const XmlElement& file : root.children) {
    if (file.name != "file") continue;
    const std::string* name = file.attr("name");
    if (!name) continue;
    const std::string path = relativize(*name, paths.worktree_root);
    for (const XmlElement& v : file.children) {
      if (v.name != "violation") continue;
      const std::string* rule = v.attr("rule");
      const auto begin = int_attr(v, "beginline");
      if (!rule || rule->empty() || !begin) {
        ++report.skipped;
        continue;
      }
      const std::string* ruleset = v.attr("ruleset");
      const std::string category = ruleset ? std::string(trim(*ruleset)) : std::string();
      if (category == "Documentation") continue;
      std::string message(trim(v.text));
      if (message.empty()) message = *rule;
      report.warnings.push_back(Warning{Tool::Pmd, *rule, category, std::move(message), path,
                                        make_span(*begin, int_attr(v, "endline"), int_attr(v, "begincolumn"),
                                                  int_attr(v, "endcolumn"))});
    }
  }
  return report;
}

namespace {

const XmlElement* pick_source_line(const XmlElement& bug) {
  const auto line_bearing = [](const XmlElement& el) {
    return el.name == "SourceLine" && int_attr(el, "start").has_value();
  };
  const auto is_primary = [](const XmlElement& el) {
    const std::string* p = el.attr("primary");
    return p && *p == "true";
  };
  const XmlElement* first_direct = nullptr;
  for (const XmlElement& c : bug.children) {
    if (!line_bearing(c)) continue;
    if (is_primary(c)) return &c;
    if (!first_direct) first_direct = &c;
  }
  if (first_direct) return first_direct;

  const XmlElement* first_nested = nullptr;
  for (const XmlElement& c : bug.children) {
    for (const XmlElement& g : c.children) {
      if (!line_bearing(g)) continue;
      if (is_primary(g)) return &g;
      if (!first_nested) first_nested = &g;
    }
  }
  return first_nested;
}

std::string resolve_sourcepath(const std::string& sourcepath, const std::vector<std::string>& src_dirs,
                               const PathMapping& paths) {
  std::vector<std::string> candidates;
  for (const auto& dir : src_dirs) {
    std::string rel = relativize(dir, paths.worktree_root);
    if (rel.starts_with('/')) continue;  // outside the worktree
    while (!rel.empty() && rel.back() == '/') rel.pop_back();
    candidates.push_back(rel.empty() ? sourcepath : rel + "/" + sourcepath);
  }
  if (paths.file_exists) {
    for (const auto& c : candidates) {
      if (paths.file_exists(c)) return c;
    }
  }
  if (candidates.size() == 1) return candidates.front();
  return sourcepath;
}

}  // namespace

Report parse_spotbugs_report(std::string_view xml, std::string commit_sha, const PathMapping& paths,
                             std::string_view source_name) {
  const XmlElement root = detail::parse_xml(xml, source_name);
  if (root.name != "BugCollection") {
    throw ReportParseError(std::string(source_name), root.line, root.column,
                           "expected <BugCollection> root, found <" + root.name + ">");
  }
  std::vector<std::string> src_dirs;
  for (const XmlElement& c : root.children) {
    if (c.name != "Project") continue;
    for (const XmlElement& d : c.children) {
      if (d.name == "SrcDir") src_dirs.push_back(normalize_separators(std::string(trim(d.text))));
    }
  }

  Report report;
  report.commit_sha = std::move(commit_sha);
  for (const XmlElement& bug : root.children) {
    if (bug.name != "BugInstance") continue;
    const std::string* type = bug.attr("type");
    const XmlElement* line = pick_source_line(bug);
    const std::string* sourcepath = line ? line->attr("sourcepath") : nullptr;
    if (!type || type->empty() || !line || !sourcepath) {
      ++report.skipped;
      continue;
    }
    std::string message;
    for (const char* tag : {"LongMessage", "ShortMessage"}) {
      for (const XmlElement& c : bug.children) {
        if (c.name == tag && message.empty()) message = std::string(trim(c.text));
      }
    }
    if (message.empty()) message = *type;
    const std::string* category = bug.attr("category");
    report.warnings.push_back(Warning{Tool::SpotBugs, *type, category ? *category : std::string(), std::move(message),
                                      resolve_sourcepath(normalize_separators(*sourcepath), src_dirs, paths),
                                      make_span(*int_attr(*line, "start"), int_attr(*line, "end"), std::nullopt,
                                                std::nullopt)});
  }
  return report;
}

namespace {

constexpr std::string_view kPmdRulesets =
    "category/java/bestpractices.xml,category/java/codestyle.xml,category/java/design.xml,"
    "category/java/errorprone.xml,category/java/multithreading.xml,category/java/performance.xml,"
    "category/java/security.xml";

bool has_java_sources(const fs::path& root) {
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (it->is_directory() && it->path().filename() == ".git") {
      it.disable_recursion_pending();
      continue;
    }
    if (it->is_regular_file() && ends_with_java(it->path().filename().string())) return true;
  }
  return false;
}

std::string tail(std::string_view s, std::size_t n = 400) {
  s = trim(s);
  return std::string(s.size() > n ? s.substr(s.size() - n) : s);
}

ProcessOptions cwd_options(const fs::path& dir) {
  ProcessOptions o;
  o.cwd = dir;
  return o;
}

}  // namespace

ExternalRun run_external_analyzer(Tool tool, const fs::path& worktree, const fs::path& report_path,
                                  const ExternalToolConfig& config) {
  if (!report_path.parent_path().empty()) fs::create_directories(report_path.parent_path());
  fs::remove(report_path);

  if (tool == Tool::Pmd) {
    if (!has_java_sources(worktree)) {
      std::ofstream(report_path) << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<pmd></pmd>\n";
      return {report_path, {}};
    }
    std::vector<std::string> argv = config.pmd_command;
    argv.insert(argv.end(), {"check", "--no-progress", "--no-cache", "-d", worktree.string(), "-R",
                             std::string(kPmdRulesets), "-f", "xml", "-r", report_path.string()});
    const ProcessResult r = run_process(argv, cwd_options(worktree));
    // PMD exits 4 when violations were found and 5 on recoverable file errors.
    if ((r.exit_code == 0 || r.exit_code == 4 || r.exit_code == 5) && fs::exists(report_path)) return {report_path, {}};
    return {std::nullopt, "analyzer error: pmd exit " + std::to_string(r.exit_code) + ": " + tail(r.err)};
  }

  if (tool == Tool::SpotBugs) {
    const ProcessResult build = run_process(config.build_command, cwd_options(worktree));
    if (!build.ok()) return {std::nullopt, std::string(kBuildFailed)};
    std::vector<std::string> class_dirs;
    for (const auto& d : config.class_dirs) {
      if (fs::is_directory(worktree / d)) class_dirs.push_back((worktree / d).string());
    }
    if (class_dirs.empty()) return {std::nullopt, std::string(kBuildFailed)};
    std::vector<std::string> argv = config.spotbugs_command;
    argv.insert(argv.end(), {"-textui", "-xml:withMessages", "-output", report_path.string()});
    if (fs::is_directory(worktree / "src/main/java")) {
      argv.insert(argv.end(), {"-sourcepath", (worktree / "src/main/java").string()});
    }
    argv.insert(argv.end(), class_dirs.begin(), class_dirs.end());
    const ProcessResult r = run_process(argv, cwd_options(worktree));
    if (r.ok() && fs::exists(report_path)) return {report_path, {}};
    return {std::nullopt, "analyzer error: spotbugs exit " + std::to_string(r.exit_code) + ": " + tail(r.err)};
  }

  return {std::nullopt, "analyzer error: builtin analyzer has no external executable"};
}

}  // namespace nascar
