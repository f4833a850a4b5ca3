#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nascar/warning.hpp"

namespace nascar {

/// How report paths are mapped back to repo-relative form.
struct PathMapping {
  /// Absolute checkout directory the tool analyzed; stripped from absolute paths.
  std::string worktree_root;
  /// Used to pick the source directory a SpotBugs `sourcepath` lives under
  /// when a report lists several. Receives a repo-relative path.
  std::function<bool(const std::string&)> file_exists;
};

/// Parses a PMD XML report. Violations in the Documentation ruleset are dropped.
/// Throws ReportParseError (with `source:line:col`) on malformed XML.
Report parse_pmd_report(std::string_view xml, std::string commit_sha, const PathMapping& paths = {},
                        std::string_view source_name = "pmd-report.xml");

/// Parses a SpotBugs XML BugCollection, one warning per BugInstance anchored
/// at its primary SourceLine. Instances without a line-bearing SourceLine are
/// counted in Report::skipped.
Report parse_spotbugs_report(std::string_view xml, std::string commit_sha, const PathMapping& paths = {},
                             std::string_view source_name = "spotbugs-report.xml");

/// Longest line the LongLine rule tolerates.
inline constexpr std::size_t kMaxLineLength = 120;

/// Deterministic line-based analyzer with three rules: LongLine, EmptyCatch
/// and SysOut. Only `.java` paths are analyzed. Warnings are ordered by file,
/// line, then rule.
Report builtin_analyze(const std::map<std::string, std::string>& files, std::string commit_sha);

/// Invocation of the external tools. Commands are argv prefixes so wrappers
/// and test doubles can stand in for the real binaries.
struct ExternalToolConfig {
  std::vector<std::string> pmd_command{"pmd"};
  std::vector<std::string> spotbugs_command{"spotbugs"};
  /// Run in the worktree before SpotBugs; a non-zero exit skips the commit.
  std::vector<std::string> build_command{"mvn", "-q", "-DskipTests", "-Dmaven.javadoc.skip=true", "package"};
  /// Class directories (relative to the worktree) handed to SpotBugs.
  std::vector<std::string> class_dirs{"target/classes", "build/classes/java/main"};
};

struct ExternalRun {
  /// Set on success.
  std::optional<std::filesystem::path> report;
  /// "build failed" or "analyzer error: ..." otherwise.
  std::string skip_reason;

  bool ok() const noexcept { return report.has_value(); }
};

inline constexpr std::string_view kBuildFailed = "build failed";

/// Runs PMD or SpotBugs over a checked-out worktree, writing an XML report to
/// `report_path`.
ExternalRun run_external_analyzer(Tool tool, const std::filesystem::path& worktree,
                                  const std::filesystem::path& report_path, const ExternalToolConfig& config = {});

}  // namespace nascar
