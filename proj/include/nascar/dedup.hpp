#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nascar/dataset.hpp"
#include "nascar/warning.hpp"

namespace nascar {

inline constexpr std::size_t kNumPermutations = 128;
inline constexpr std::size_t kLshBands = 4;
inline constexpr std::size_t kLshRows = 32;
inline constexpr double kDuplicateThreshold = 0.95;
inline constexpr std::uint64_t kDefaultMinHashSeed = 1;
static_assert(kLshBands * kLshRows == kNumPermutations);

/// Lines [start-3, end+3] of `file_text`, clamped to the file, joined by '\n'.
/// Throws Error when the span lies beyond the last line.
std::string extract_context(std::string_view file_text, const Span& span);

/// Sorted, duplicate-free 64-bit hashes of token 3-grams.
using ShingleSet = std::vector<std::uint64_t>;

/// ASCII-lowercases, splits on whitespace runs and hashes every window of
/// three consecutive tokens. Fewer than three tokens give a single hash of the
/// whole normalized text.
ShingleSet shingle(std::string_view text);

struct MinHashSignature {
  std::array<std::uint64_t, kNumPermutations> values{};
  std::uint64_t seed = kDefaultMinHashSeed;

  friend bool operator==(const MinHashSignature&, const MinHashSignature&) = default;
};

/// Min over the set of (a_i*x + b_i) mod (2^61 - 1) for 128 seeded (a_i, b_i).
/// Throws Error on an empty set.
MinHashSignature minhash(const ShingleSet& set, std::uint64_t seed = kDefaultMinHashSeed);

/// Fraction of agreeing positions. Throws Error when the seeds differ.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

/// Banded LSH over signatures: 4 bands of 32 rows.
class LshIndex {
 public:
  void insert(std::size_t id, const MinHashSignature& sig);
  /// Ids sharing at least one band bucket with `sig`, ascending, without repeats.
  std::vector<std::size_t> query(const MinHashSignature& sig) const;
  std::size_t size() const noexcept { return size_; }

 private:
  std::array<std::unordered_map<std::uint64_t, std::vector<std::size_t>>, kLshBands> buckets_;
  std::size_t size_ = 0;
};

/// |a ∩ b| / |a ∪ b| over sorted, duplicate-free ranges; 1.0 when both are empty.
template <typename Range>
double brute_force_jaccard(const Range& a, const Range& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = static_cast<std::size_t>(std::distance(a.begin(), a.end())) +
                          static_cast<std::size_t>(std::distance(b.begin(), b.end())) - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

/// Source text of a record's snapshot, or nullopt when unavailable.
using SourceLoader = std::function<std::optional<std::string>(const LabeledRecord&)>;

/// Loads `archive_root / record.filepath`.
SourceLoader archive_loader(std::filesystem::path archive_root);

/// Total scan order: (repo, commit_date, filename, start line, warning_type),
/// then the remaining fields.
bool dedup_order_less(const LabeledRecord& a, const LabeledRecord& b);

struct DropLogEntry {
  /// Positions in scan order.
  std::size_t dropped_id = 0;
  std::size_t kept_id = 0;
  double jaccard = 0.0;
  LabeledRecord dropped;
  LabeledRecord kept;
};

struct FlaggedRecord {
  std::size_t id = 0;
  std::string reason;
};

struct DedupResult {
  /// Survivors in scan order.
  std::vector<LabeledRecord> kept;
  std::size_t dropped_count = 0;
  std::vector<DropLogEntry> drop_log;
  /// Records kept without comparison because their source was missing or stale.
  std::vector<FlaggedRecord> flagged;
};

/// Scans records in dedup_order_less order. Each record is compared with the
/// kept records of its (tool, warning_type, label) partition found through
/// the LSH index, and is dropped when one has estimated Jaccard >= 0.95.
DedupResult dedup_dataset(std::vector<LabeledRecord> records, const SourceLoader& load, unsigned workers = 1);

/// One JSON object per line: dropped_id, kept_id, jaccard, plus identifying
/// fields of both records.
std::string drop_log_jsonl(const std::vector<DropLogEntry>& log);

}  // namespace nascar
