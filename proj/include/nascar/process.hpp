#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace nascar {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;

  bool ok() const noexcept { return exit_code == 0; }
};

struct ProcessOptions {
  std::filesystem::path cwd;
  /// Written to the child's stdin, which is then closed.
  std::string input;
  /// Added to (or overriding) the parent environment.
  std::map<std::string, std::string> env;
};

/// Runs argv[0] (looked up on PATH) and collects stdout/stderr.
/// Throws Error only when the process cannot be spawned at all; a missing
/// executable is reported as exit code 127.
ProcessResult run_process(std::span<const std::string> argv, const ProcessOptions& options = {});

inline ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options = {}) {
  return run_process(std::span<const std::string>(argv), options);
}

}  // namespace nascar
