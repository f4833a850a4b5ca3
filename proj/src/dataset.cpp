#include "nascar/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"

#include "nascar/errors.hpp"
#include "nascar/parquet.hpp"
#include "nascar/text.hpp"
#include "nascar/time.hpp"
#include "nascar/zip.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace nascar {
namespace {

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

// Write-then-rename so readers never see a partial file.
void write_atomically(const fs::path& target, std::string_view bytes) {
  static std::atomic<unsigned> counter{0};
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DatasetError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw DatasetError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DatasetError("cannot rename onto " + target.string());
  }
}

bool safe_relative(std::string_view path) {
  if (path.empty() || path.front() == '/' || path.find('\0') != std::string_view::npos) return false;
  std::size_t start = 0;
  while (start <= path.size()) {
    std::size_t end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    const std::string_view part = path.substr(start, end - start);
    if (part == ".." || part == "." || part.empty()) return false;
    start = end + 1;
  }
  return true;
}

const std::vector<std::string>& strings(const parquet::Table& t, std::size_t i) {
  const auto* v = std::get_if<std::vector<std::string>>(&t.columns[i].values);
  if (v == nullptr) throw DatasetError("column " + t.columns[i].name + " must be a string column");
  return *v;
}

}  // namespace

std::string positions_json(const Span& span) {
  ordered_json j;
  j["startLine"] = span.start_line;
  j["endLine"] = span.end_line;
  if (span.start_col) j["startColumn"] = *span.start_col;
  if (span.end_col) j["endColumn"] = *span.end_col;
  return j.dump();
}

std::optional<Span> parse_positions(std::string_view text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  const auto as_int = [](const nlohmann::json& v) -> std::optional<int> {
    if (!v.is_number_integer()) return std::nullopt;
    const auto i = v.get<std::int64_t>();
    if (i < 1 || i > std::numeric_limits<int>::max()) return std::nullopt;
    return static_cast<int>(i);
  };
  Span s;
  for (const auto& [key, value] : j.items()) {
    const auto v = as_int(value);
    if (!v) return std::nullopt;
    if (key == "startLine") {
      s.start_line = *v;
    } else if (key == "endLine") {
      s.end_line = *v;
    } else if (key == "startColumn") {
      s.start_col = v;
    } else if (key == "endColumn") {
      s.end_col = v;
    } else {
      return std::nullopt;
    }
  }
  if (!j.contains("startLine") || !j.contains("endLine") || !s.valid()) return std::nullopt;
  return s;
}

std::string repo_slug(std::string_view url) {
  std::string_view u = url;
  if (auto p = u.find("://"); p != std::string_view::npos) u.remove_prefix(p + 3);
  // scp-like `git@host:path`
  if (auto at = u.find('@'); at != std::string_view::npos && at < u.find('/')) u.remove_prefix(at + 1);
  while (!u.empty() && u.back() == '/') u.remove_suffix(1);
  if (u.ends_with(".git")) u.remove_suffix(4);
  while (!u.empty() && (u.front() == '/' || u.back() == '/')) {
    if (u.front() == '/') u.remove_prefix(1);
    if (!u.empty() && u.back() == '/') u.remove_suffix(1);
  }
  std::string slug;
  for (char c : u) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                      c == '-' || c == '_';
    slug.push_back(keep ? c : '_');
  }
  if (slug.empty() || slug == "." || slug == "..") slug = "repo";
  return slug;
}

std::string archive_relative_path(std::string_view repo, std::string_view parent_sha, std::string_view path) {
  if (!safe_relative(path)) throw ArchiveError("unsafe repository path: " + std::string(path));
  if (!is_sha1_hex(parent_sha)) throw ArchiveError("not a commit sha: " + std::string(parent_sha));
  return "files/" + repo_slug(repo) + "/" + std::string(parent_sha) + "/" + std::string(path);
}

LabeledRecord to_record(const ClassifiedWarning& cw) {
  const Warning& w = cw.warning;
  if (!w.span.valid()) throw DatasetError("warning without a valid span: " + w.file_path);
  LabeledRecord r;
  r.tool = std::string(to_string(w.tool));
  r.warning_type = w.rule_id;
  r.warning_msg = w.message;
  r.parent_sha = cw.pair.parent.sha;
  r.parent_date = format_iso8601_utc(cw.pair.parent.commit_date_utc);
  r.commit_sha = cw.pair.child.sha;
  r.commit_date = format_iso8601_utc(cw.pair.child.commit_date_utc);
  r.repo = cw.pair.repo_url;
  r.filename = w.file_path;
  r.positions = positions_json(w.span);
  r.filepath = archive_relative_path(r.repo, r.parent_sha, r.filename);
  r.label = cw.label == Label::Actionable ? 1 : 0;
  return r;
}

std::string archive_source(std::string_view repo, std::string_view parent_sha, std::string_view path,
                           std::string_view content, const fs::path& archive_root) {
  std::string rel = archive_relative_path(repo, parent_sha, path);
  const fs::path target = archive_root / rel;
  if (fs::exists(target)) return rel;
  std::error_code ec;
  fs::create_directories(target.parent_path(), ec);
  if (ec) throw ArchiveError("cannot create " + target.parent_path().string() + ": " + ec.message());
  try {
    write_atomically(target, content);
  } catch (const DatasetError& e) {
    throw ArchiveError(e.what());
  }
  return rel;
}

std::vector<Violation> validate_record(const LabeledRecord& r, const fs::path& archive_root) {
  std::vector<Violation> out;
  const auto fail = [&](std::string field, std::string message) {
    out.push_back({std::move(field), std::move(message)});
  };
  if (!parse_tool(r.tool) || r.tool != to_string(*parse_tool(r.tool))) fail("tool", "unknown tool '" + r.tool + "'");
  if (r.warning_type.empty()) fail("warning_type", "empty");
  if (r.warning_msg.empty()) fail("warning_msg", "empty");
  if (!is_sha1_hex(r.parent_sha)) fail("parent_sha", "not a 40-character lowercase hex sha");
  if (!is_sha1_hex(r.commit_sha)) fail("commit_sha", "not a 40-character lowercase hex sha");
  const auto pd = parse_iso8601_utc(r.parent_date);
  const auto cd = parse_iso8601_utc(r.commit_date);
  if (!pd) fail("parent_date", "not YYYY-MM-DDTHH:MM:SSZ");
  if (!cd) fail("commit_date", "not YYYY-MM-DDTHH:MM:SSZ");
  if (pd && cd && *pd > *cd) fail("parent_date", "later than commit_date");
  if (r.repo.empty()) fail("repo", "empty");
  if (!safe_relative(r.filename)) fail("filename", "not a safe repository-relative path");
  if (!parse_positions(r.positions)) fail("positions", "malformed positions JSON");
  if (r.label != 0 && r.label != 1) fail("label", "must be 0 or 1, got " + std::to_string(r.label));

  if (!safe_relative(r.filepath)) {
    fail("filepath", "not a safe archive-relative path");
  } else {
    std::string expected;
    try {
      expected = archive_relative_path(r.repo, r.parent_sha, r.filename);
    } catch (const ArchiveError&) {
    }
    std::error_code ec;
    if (!expected.empty() && expected != r.filepath) {
      fail("filepath", "expected " + expected);
    } else if (!fs::is_regular_file(archive_root / r.filepath, ec)) {
      fail("filepath", "missing from archive: " + r.filepath);
    }
  }
  return out;
}

DatasetFormat format_for_path(const fs::path& p) {
  return p.extension() == ".parquet" ? DatasetFormat::Columnar : DatasetFormat::Jsonl;
}

std::string record_to_json(const LabeledRecord& r) {
  ordered_json j;
  j["tool"] = r.tool;
  j["warning_type"] = r.warning_type;
  j["warning_msg"] = r.warning_msg;
  j["parent_sha"] = r.parent_sha;
  j["parent_date"] = r.parent_date;
  j["commit_sha"] = r.commit_sha;
  j["commit_date"] = r.commit_date;
  j["repo"] = r.repo;
  j["filename"] = r.filename;
  j["positions"] = r.positions;
  j["filepath"] = r.filepath;
  j["label"] = r.label;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

LabeledRecord record_from_json(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DatasetError(std::string("malformed record: ") + e.what());
  }
  if (!j.is_object()) throw DatasetError("record is not a JSON object");
  const auto str = [&](const char* key) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw DatasetError(std::string("record field '") + key + "' missing or not a string");
    return it->get<std::string>();
  };
  LabeledRecord r;
  r.tool = str("tool");
  r.warning_type = str("warning_type");
  r.warning_msg = str("warning_msg");
  r.parent_sha = str("parent_sha");
  r.parent_date = str("parent_date");
  r.commit_sha = str("commit_sha");
  r.commit_date = str("commit_date");
  r.repo = str("repo");
  r.filename = str("filename");
  r.positions = str("positions");
  r.filepath = str("filepath");
  auto it = j.find("label");
  if (it == j.end() || !it->is_number_integer()) throw DatasetError("record field 'label' missing or not an integer");
  r.label = it->get<std::int64_t>();
  return r;
}

void write_dataset(const std::vector<LabeledRecord>& records, const fs::path& out, DatasetFormat format) {
  std::string bytes;
  if (format == DatasetFormat::Jsonl) {
    for (const auto& r : records) {
      bytes += record_to_json(r);
      bytes += '\n';
    }
  } else {
    parquet::Table t;
    std::array<std::vector<std::string>, 11> cols;
    std::vector<std::int64_t> labels;
    for (auto& c : cols) c.reserve(records.size());
    labels.reserve(records.size());
    for (const auto& r : records) {
      const std::string* fields[] = {&r.tool,        &r.warning_type, &r.warning_msg, &r.parent_sha,
                                     &r.parent_date, &r.commit_sha,   &r.commit_date, &r.repo,
                                     &r.filename,    &r.positions,    &r.filepath};
      for (std::size_t i = 0; i < cols.size(); ++i) cols[i].push_back(to_valid_utf8(*fields[i]));
      labels.push_back(r.label);
    }
    for (std::size_t i = 0; i < cols.size(); ++i) t.columns.push_back({std::string(kColumnNames[i]), std::move(cols[i])});
    t.columns.push_back({std::string(kColumnNames[11]), std::move(labels)});
    bytes = parquet::write(t);
  }
  if (out.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(out.parent_path(), ec);
  }
  write_atomically(out, bytes);
}

std::vector<LabeledRecord> read_dataset(const fs::path& in) {
  const std::string bytes = read_all(in);
  std::vector<LabeledRecord> out;
  if (bytes.starts_with("PAR1")) {
    const parquet::Table t = parquet::read(bytes);
    if (t.columns.size() != kColumnNames.size()) throw DatasetError("unexpected column count in " + in.string());
    for (std::size_t i = 0; i < kColumnNames.size(); ++i) {
      if (t.columns[i].name != kColumnNames[i]) throw DatasetError("unexpected column '" + t.columns[i].name + "'");
    }
    const auto* labels = std::get_if<std::vector<std::int64_t>>(&t.columns[11].values);
    if (labels == nullptr) throw DatasetError("label column must be INT64");
    out.resize(t.num_rows());
    std::string LabeledRecord::*fields[] = {&LabeledRecord::tool,        &LabeledRecord::warning_type,
                                            &LabeledRecord::warning_msg, &LabeledRecord::parent_sha,
                                            &LabeledRecord::parent_date, &LabeledRecord::commit_sha,
                                            &LabeledRecord::commit_date, &LabeledRecord::repo,
                                            &LabeledRecord::filename,    &LabeledRecord::positions,
                                            &LabeledRecord::filepath};
    for (std::size_t c = 0; c < 11; ++c) {
      const auto& col = strings(t, c);
      for (std::size_t i = 0; i < col.size(); ++i) out[i].*fields[c] = col[i];
    }
    for (std::size_t i = 0; i < labels->size(); ++i) out[i].label = (*labels)[i];
    return out;
  }
  std::size_t line_no = 0;
  for (std::string_view line : split_lines(bytes)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(line));
    } catch (const DatasetError& e) {
      throw DatasetError(in.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void pack_archive_zip(const fs::path& archive_root, const fs::path& zip_path) {
  std::vector<std::pair<std::string, std::string>> entries;
  const fs::path files = archive_root / "files";
  if (fs::exists(files)) {
    for (const auto& e : fs::recursive_directory_iterator(files)) {
      if (!e.is_regular_file()) continue;
      entries.emplace_back(fs::relative(e.path(), archive_root).generic_string(), std::string());
    }
  }
  std::sort(entries.begin(), entries.end());
  for (auto& [name, data] : entries) data = read_all(archive_root / name);
  const std::string bytes = zip::write_stored(entries);
  write_atomically(zip_path, bytes);
}

}  // namespace nascar
