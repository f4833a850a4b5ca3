#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nascar/process.hpp"

namespace nascar::detail {

/// Runs `git -C dir <args>` with a fixed locale and prompts disabled.
ProcessResult git(const std::filesystem::path& dir, std::vector<std::string> args, std::string input = {});

/// Like git() but throws GitError on a non-zero exit.
std::string git_checked(const std::filesystem::path& dir, std::vector<std::string> args, std::string input = {});

}  // namespace nascar::detail
