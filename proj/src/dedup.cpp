#include "nascar/dedup.hpp"

#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "nascar/errors.hpp"
#include "nascar/text.hpp"

namespace nascar {
namespace {

__extension__ using u128 = unsigned __int128;

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t hash_text(std::string_view s) { return splitmix64(fnv1a(s)); }

std::uint64_t mod_prime(u128 v) {
  // 2^61 = 1 (mod p)
  std::uint64_t r = static_cast<std::uint64_t>(v & kPrime) + static_cast<std::uint64_t>(v >> 61);
  r = (r & kPrime) + (r >> 61);
  return r >= kPrime ? r - kPrime : r;
}

struct Permutations {
  std::array<std::uint64_t, kNumPermutations> a{};
  std::array<std::uint64_t, kNumPermutations> b{};

  explicit Permutations(std::uint64_t seed) {
    // Raw engine output keeps the parameters identical across standard libraries.
    std::mt19937_64 gen(seed);
    for (std::size_t i = 0; i < kNumPermutations; ++i) {
      do {
        a[i] = gen() % kPrime;
      } while (a[i] == 0);
      b[i] = gen() % kPrime;
    }
  }
};

const Permutations& permutations_for(std::uint64_t seed) {
  static const Permutations default_perms(kDefaultMinHashSeed);
  if (seed == kDefaultMinHashSeed) return default_perms;
  thread_local std::map<std::uint64_t, Permutations> cache;
  auto it = cache.find(seed);
  if (it == cache.end()) it = cache.emplace(seed, Permutations(seed)).first;
  return it->second;
}

std::uint64_t band_hash(const MinHashSignature& sig, std::size_t band) {
  std::uint64_t h = 0x84222325cbf29ce4ULL ^ band;
  for (std::size_t r = 0; r < kLshRows; ++r) h = splitmix64(h ^ sig.values[band * kLshRows + r]);
  return h;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

int start_line_of(const LabeledRecord& r) {
  const auto s = parse_positions(r.positions);
  return s ? s->start_line : 0;
}

using PartitionKey = std::tuple<std::string, std::string, std::int64_t>;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

}  // namespace

std::string extract_context(std::string_view file_text, const Span& span) {
  if (!span.valid()) throw Error("invalid span");
  const auto lines = split_lines(file_text);
  const int n = static_cast<int>(lines.size());
  if (span.end_line > n) {
    throw Error("span " + std::to_string(span.start_line) + ".." + std::to_string(span.end_line) +
                " beyond end of file (" + std::to_string(n) + " lines)");
  }
  const int first = std::max(1, span.start_line - 3);
  const int last = std::min(n, span.end_line + 3);
  std::string out;
  for (int i = first; i <= last; ++i) {
    if (i > first) out.push_back('\n');
    out.append(lines[static_cast<std::size_t>(i - 1)]);
  }
  return out;
}

ShingleSet shingle(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    if (is_space(c)) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));

  ShingleSet out;
  if (tokens.size() < 3) {
    std::string joined;
    for (const auto& t : tokens) {
      if (!joined.empty()) joined.push_back(' ');
      joined += t;
    }
    out.push_back(hash_text(joined));
    return out;
  }
  out.reserve(tokens.size() - 2);
  for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
    out.push_back(hash_text(tokens[i] + ' ' + tokens[i + 1] + ' ' + tokens[i + 2]));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MinHashSignature minhash(const ShingleSet& set, std::uint64_t seed) {
  if (set.empty()) throw Error("minhash of an empty set");
  const Permutations& p = permutations_for(seed);
  MinHashSignature sig;
  sig.seed = seed;
  sig.values.fill(kPrime);
  for (std::uint64_t raw : set) {
    const std::uint64_t x = mod_prime(raw);
    for (std::size_t i = 0; i < kNumPermutations; ++i) {
      const std::uint64_t v = mod_prime(static_cast<u128>(p.a[i]) * x + p.b[i]);
      if (v < sig.values[i]) sig.values[i] = v;
    }
  }
  return sig;
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
  if (a.seed != b.seed) throw Error("signatures built with different seeds");
  std::size_t same = 0;
  for (std::size_t i = 0; i < kNumPermutations; ++i) same += a.values[i] == b.values[i] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(kNumPermutations);
}

void LshIndex::insert(std::size_t id, const MinHashSignature& sig) {
  for (std::size_t band = 0; band < kLshBands; ++band) buckets_[band][band_hash(sig, band)].push_back(id);
  ++size_;
}

std::vector<std::size_t> LshIndex::query(const MinHashSignature& sig) const {
  std::vector<std::size_t> out;
  for (std::size_t band = 0; band < kLshBands; ++band) {
    auto it = buckets_[band].find(band_hash(sig, band));
    if (it != buckets_[band].end()) out.insert(out.end(), it->second.begin(), it->second.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SourceLoader archive_loader(std::filesystem::path archive_root) {
  return [root = std::move(archive_root)](const LabeledRecord& r) -> std::optional<std::string> {
    std::error_code ec;
    const auto p = root / r.filepath;
    if (r.filepath.empty() || !std::filesystem::is_regular_file(p, ec)) return std::nullopt;
    return read_file(p);
  };
}

bool dedup_order_less(const LabeledRecord& a, const LabeledRecord& b) {
  const int sa = start_line_of(a);
  const int sb = start_line_of(b);
  return std::tie(a.repo, a.commit_date, a.filename, sa, a.warning_type, a.tool, a.warning_msg, a.parent_sha,
                  a.parent_date, a.commit_sha, a.positions, a.filepath, a.label) <
         std::tie(b.repo, b.commit_date, b.filename, sb, b.warning_type, b.tool, b.warning_msg, b.parent_sha,
                  b.parent_date, b.commit_sha, b.positions, b.filepath, b.label);
}

DedupResult dedup_dataset(std::vector<LabeledRecord> records, const SourceLoader& load, unsigned workers) {
  std::stable_sort(records.begin(), records.end(), dedup_order_less);
  const std::size_t n = records.size();

  // Contexts are gathered sequentially; consecutive records usually share a file.
  std::vector<std::optional<std::string>> contexts(n);
  DedupResult result;
  bool loaded = false;
  std::string cached_path;
  std::optional<std::string> cached_text;
  for (std::size_t i = 0; i < n; ++i) {
    const LabeledRecord& r = records[i];
    const auto span = parse_positions(r.positions);
    if (!span) {
      result.flagged.push_back({i, "malformed positions"});
      continue;
    }
    if (!loaded || r.filepath != cached_path) {
      loaded = true;
      cached_path = r.filepath;
      cached_text = load(r);
    }
    if (!cached_text) {
      result.flagged.push_back({i, "source file missing: " + r.filepath});
      continue;
    }
    try {
      contexts[i] = extract_context(*cached_text, *span);
    } catch (const Error& e) {
      result.flagged.push_back({i, std::string("stale source: ") + e.what()});
    }
  }

  std::vector<std::optional<MinHashSignature>> sigs(n);
  const auto compute = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (contexts[i]) sigs[i] = minhash(shingle(*contexts[i]));
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1 || n < 1024) {
    compute(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t begin = 0; begin < n; begin += chunk) pool.emplace_back(compute, begin, std::min(n, begin + chunk));
  }

  std::map<PartitionKey, LshIndex> indexes;
  std::vector<bool> keep(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    if (!sigs[i]) continue;
    LshIndex& index = indexes[PartitionKey{records[i].tool, records[i].warning_type, records[i].label}];
    std::optional<std::size_t> best;
    double best_j = 0.0;
    for (std::size_t c : index.query(*sigs[i])) {
      const double j = estimate_jaccard(*sigs[i], *sigs[c]);
      if (j >= kDuplicateThreshold && (!best || j > best_j)) {
        best = c;
        best_j = j;
      }
    }
    if (best) {
      keep[i] = false;
      result.drop_log.push_back({i, *best, best_j, records[i], records[*best]});
    } else {
      index.insert(i, *sigs[i]);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) result.kept.push_back(std::move(records[i]));
  }
  result.dropped_count = n - result.kept.size();
  return result;
}

std::string drop_log_jsonl(const std::vector<DropLogEntry>& log) {
  const auto brief = [](const LabeledRecord& r) {
    nlohmann::ordered_json j;
    j["repo"] = r.repo;
    j["commit_sha"] = r.commit_sha;
    j["filename"] = r.filename;
    j["positions"] = r.positions;
    j["warning_type"] = r.warning_type;
    j["label"] = r.label;
    return j;
  };
  std::string out;
  for (const auto& e : log) {
    nlohmann::ordered_json j;
    j["dropped_id"] = e.dropped_id;
    j["kept_id"] = e.kept_id;
    j["jaccard"] = e.jaccard;
    j["dropped"] = brief(e.dropped);
    j["kept"] = brief(e.kept);
    out += j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

}  // namespace nascar
