#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nascar::zip {

/// Entries are written in the given order with "stored" (uncompressed)
/// method and a fixed 1980-01-01 timestamp.
std::string write_stored(const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace nascar::zip
