#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nascar/classifier.hpp"

namespace nascar {

/// One row of the dataset. Column names and order follow kColumnNames.
struct LabeledRecord {
  std::string tool;
  std::string warning_type;
  std::string warning_msg;
  std::string parent_sha;
  std::string parent_date;
  std::string commit_sha;
  std::string commit_date;
  std::string repo;
  std::string filename;
  /// Stringified JSON: {"startLine":s,"endLine":e[,"startColumn":c,"endColumn":d]}.
  std::string positions;
  /// Archive-relative path of the source snapshot.
  std::string filepath;
  /// 0 = non-actionable, 1 = actionable.
  std::int64_t label = 0;

  friend bool operator==(const LabeledRecord&, const LabeledRecord&) = default;
};

inline constexpr std::array<std::string_view, 12> kColumnNames{
    "tool",        "warning_type", "warning_msg", "parent_sha", "parent_date", "commit_sha",
    "commit_date", "repo",         "filename",    "positions",  "filepath",    "label"};

/// `{"startLine":..,"endLine":..}` plus columns when both are present.
std::string positions_json(const Span& span);
/// Parses positions JSON; nullopt when malformed or violating the span invariants.
std::optional<Span> parse_positions(std::string_view json);

/// URL host + path with separators replaced by `_`, e.g.
/// "https://github.com/apache/kafka.git" -> "github.com_apache_kafka".
std::string repo_slug(std::string_view url);

/// `files/<repo_slug>/<parent_sha>/<path>`. Throws ArchiveError for absolute
/// paths or `..` components.
std::string archive_relative_path(std::string_view repo, std::string_view parent_sha, std::string_view path);

/// Maps a classified warning to a row; the snapshot is taken at the parent.
LabeledRecord to_record(const ClassifiedWarning& cw);

/// Stores `content` under `archive_root` at archive_relative_path(); a file
/// already present is left untouched. Returns the archive-relative path.
std::string archive_source(std::string_view repo, std::string_view parent_sha, std::string_view path,
                           std::string_view content, const std::filesystem::path& archive_root);

struct Violation {
  std::string field;
  std::string message;
};

/// Empty when the record satisfies every row invariant and its filepath exists
/// under `archive_root`.
std::vector<Violation> validate_record(const LabeledRecord& r, const std::filesystem::path& archive_root);

enum class DatasetFormat { Columnar, Jsonl };

/// `.parquet` -> Columnar, anything else -> Jsonl.
DatasetFormat format_for_path(const std::filesystem::path& p);

/// Writes the whole dataset; throws DatasetError on I/O failure.
void write_dataset(const std::vector<LabeledRecord>& records, const std::filesystem::path& out, DatasetFormat format);

/// Reads either format (detected from the file's magic bytes).
std::vector<LabeledRecord> read_dataset(const std::filesystem::path& in);

/// JSON object with the twelve columns as keys, in column order.
std::string record_to_json(const LabeledRecord& r);
LabeledRecord record_from_json(std::string_view line);

/// Packs every file below `archive_root/files` into a ZIP (stored entries,
/// sorted names, fixed timestamps) so identical archives give identical bytes.
void pack_archive_zip(const std::filesystem::path& archive_root, const std::filesystem::path& zip_path);

}  // namespace nascar
