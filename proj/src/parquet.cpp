#include "nascar/parquet.hpp"

#include <map>
#include <variant>

#include "nascar/errors.hpp"

namespace nascar::parquet {
namespace {

constexpr std::string_view kMagic = "PAR1";

// Parquet enum values used here.
constexpr int kTypeInt64 = 2;
constexpr int kTypeByteArray = 6;
constexpr int kRequired = 0;
constexpr int kConvertedUtf8 = 0;
constexpr int kEncodingPlain = 0;
constexpr int kEncodingRle = 3;
constexpr int kCodecUncompressed = 0;
constexpr int kPageData = 0;

// Thrift compact protocol type ids.
enum : std::uint8_t {
  kStop = 0,
  kBoolTrue = 1,
  kBoolFalse = 2,
  kByte = 3,
  kI16 = 4,
  kI32 = 5,
  kI64 = 6,
  kDouble = 7,
  kBinary = 8,
  kList = 9,
  kSet = 10,
  kMap = 11,
  kStruct = 12,
};

class ThriftWriter {
 public:
  std::string& buf() { return out_; }

  void begin_struct() { last_.push_back(0); }
  void end_struct() {
    out_.push_back(static_cast<char>(kStop));
    last_.pop_back();
  }

  void field_i32(int id, std::int32_t v) {
    header(id, kI32);
    varint(zigzag(v));
  }
  void field_i64(int id, std::int64_t v) {
    header(id, kI64);
    varint(zigzag(v));
  }
  void field_string(int id, std::string_view s) {
    header(id, kBinary);
    binary(s);
  }
  void field_struct(int id) {
    header(id, kStruct);
    begin_struct();
  }
  void field_list(int id, std::uint8_t elem_type, std::size_t size) {
    header(id, kList);
    if (size < 15) {
      out_.push_back(static_cast<char>((size << 4) | elem_type));
    } else {
      out_.push_back(static_cast<char>(0xf0 | elem_type));
      varint(size);
    }
  }
  void elem_i32(std::int32_t v) { varint(zigzag(v)); }
  void elem_string(std::string_view s) { binary(s); }
  void elem_struct() { begin_struct(); }

 private:
  static std::uint64_t zigzag(std::int64_t v) {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
  }
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      out_.push_back(static_cast<char>((v & 0x7f) | 0x80));
      v >>= 7;
    }
    out_.push_back(static_cast<char>(v));
  }
  void binary(std::string_view s) {
    varint(s.size());
    out_.append(s);
  }
  void header(int id, std::uint8_t type) {
    const int delta = id - last_.back();
    if (delta > 0 && delta <= 15) {
      out_.push_back(static_cast<char>((delta << 4) | type));
    } else {
      out_.push_back(static_cast<char>(type));
      varint(zigzag(id));
    }
    last_.back() = id;
  }

  std::string out_;
  std::vector<int> last_;
};

// Generic decoded Thrift value; structs keep fields by id so unknown fields
// written by other producers are tolerated.
struct Value {
  std::uint8_t type = kStop;
  std::int64_t i = 0;
  std::string s;
  std::vector<Value> list;
  std::map<int, Value> fields;

  const Value* field(int id) const {
    auto it = fields.find(id);
    return it == fields.end() ? nullptr : &it->second;
  }
  const Value& require(int id, const char* what) const {
    const Value* v = field(id);
    if (v == nullptr) throw DatasetError(std::string("parquet: missing ") + what);
    return *v;
  }
};

class ThriftReader {
 public:
  ThriftReader(std::string_view data, std::size_t pos) : data_(data), pos_(pos) {}

  std::size_t pos() const { return pos_; }

  Value read_struct() {
    Value v;
    v.type = kStruct;
    int last = 0;
    for (;;) {
      const std::uint8_t b = byte();
      if (b == kStop) break;
      const std::uint8_t type = b & 0x0f;
      const int delta = b >> 4;
      const int id = delta != 0 ? last + delta : static_cast<int>(unzigzag(varint()));
      last = id;
      v.fields[id] = read_value(type);
    }
    return v;
  }

 private:
  Value read_value(std::uint8_t type) {
    Value v;
    v.type = type;
    switch (type) {
      case kBoolTrue:
        v.i = 1;
        break;
      case kBoolFalse:
        v.i = 0;
        break;
      case kByte:
        v.i = static_cast<std::int8_t>(byte());
        break;
      case kI16:
      case kI32:
      case kI64:
        v.i = unzigzag(varint());
        break;
      case kDouble:
        need(8);
        pos_ += 8;
        break;
      case kBinary: {
        const std::uint64_t n = varint();
        need(n);
        v.s.assign(data_.substr(pos_, n));
        pos_ += n;
        break;
      }
      case kList:
      case kSet: {
        const std::uint8_t h = byte();
        std::uint64_t n = h >> 4;
        if (n == 15) n = varint();
        const std::uint8_t elem = h & 0x0f;
        if (n > data_.size()) throw DatasetError("parquet: corrupt list length");
        v.list.reserve(n);
        for (std::uint64_t k = 0; k < n; ++k) {
          // Booleans inside containers are one byte each.
          if (elem == kBoolTrue || elem == kBoolFalse) {
            Value b;
            b.type = elem;
            b.i = byte() == 1 ? 1 : 0;
            v.list.push_back(std::move(b));
          } else {
            v.list.push_back(read_value(elem));
          }
        }
        break;
      }
      case kMap: {
        const std::uint64_t n = varint();
        if (n > 0) {
          const std::uint8_t kv = byte();
          for (std::uint64_t k = 0; k < n; ++k) {
            read_value(kv >> 4);
            read_value(kv & 0x0f);
          }
        }
        break;
      }
      case kStruct:
        return read_struct();
      default:
        throw DatasetError("parquet: unknown thrift type " + std::to_string(type));
    }
    return v;
  }

  static std::int64_t unzigzag(std::uint64_t v) {
    return static_cast<std::int64_t>(v >> 1) ^ -static_cast<std::int64_t>(v & 1);
  }
  void need(std::uint64_t n) const {
    if (n > data_.size() - pos_) throw DatasetError("parquet: truncated metadata");
  }
  std::uint8_t byte() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const std::uint8_t b = byte();
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if ((b & 0x80) == 0) return v;
    }
    throw DatasetError("parquet: corrupt varint");
  }

  std::string_view data_;
  std::size_t pos_;
};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(std::string_view d, std::size_t pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(d[pos + i])) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::string_view d, std::size_t pos) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(d[pos + i])) << (8 * i);
  return v;
}

bool is_string(const Table::Column& c) { return std::holds_alternative<std::vector<std::string>>(c.values); }

std::size_t column_size(const Table::Column& c) {
  return std::visit([](const auto& v) { return v.size(); }, c.values);
}

std::string plain_values(const Table::Column& c, std::size_t begin, std::size_t end) {
  std::string out;
  if (is_string(c)) {
    const auto& v = std::get<std::vector<std::string>>(c.values);
    for (std::size_t i = begin; i < end; ++i) {
      if (v[i].size() > 0xffffffffULL) throw DatasetError("parquet: value too large");
      put_u32(out, static_cast<std::uint32_t>(v[i].size()));
      out += v[i];
    }
  } else {
    const auto& v = std::get<std::vector<std::int64_t>>(c.values);
    for (std::size_t i = begin; i < end; ++i) put_u64(out, static_cast<std::uint64_t>(v[i]));
  }
  return out;
}

std::int32_t checked_i32(std::size_t v) {
  if (v > 0x7fffffffULL) throw DatasetError("parquet: page too large");
  return static_cast<std::int32_t>(v);
}

struct ChunkInfo {
  std::int64_t offset = 0;
  std::int64_t total_size = 0;
  std::int64_t num_values = 0;
};

void write_column_meta(ThriftWriter& w, const Table::Column& c, const ChunkInfo& info) {
  w.field_struct(3);  // meta_data
  w.field_i32(1, is_string(c) ? kTypeByteArray : kTypeInt64);
  w.field_list(2, kI32, 2);
  w.elem_i32(kEncodingPlain);
  w.elem_i32(kEncodingRle);
  w.field_list(3, kBinary, 1);
  w.elem_string(c.name);
  w.field_i32(4, kCodecUncompressed);
  w.field_i64(5, info.num_values);
  w.field_i64(6, info.total_size);
  w.field_i64(7, info.total_size);
  w.field_i64(9, info.offset);
  w.end_struct();
}

}  // namespace

std::size_t Table::num_rows() const { return columns.empty() ? 0 : column_size(columns.front()); }

std::string write(const Table& table, std::size_t rows_per_group) {
  if (rows_per_group == 0) throw DatasetError("parquet: rows_per_group must be positive");
  const std::size_t rows = table.num_rows();
  for (const auto& c : table.columns) {
    if (column_size(c) != rows) throw DatasetError("parquet: ragged column " + c.name);
  }

  std::string out(kMagic);
  std::vector<std::vector<ChunkInfo>> groups;
  for (std::size_t begin = 0; begin < rows; begin += rows_per_group) {
    const std::size_t end = std::min(rows, begin + rows_per_group);
    std::vector<ChunkInfo> chunks;
    for (const auto& c : table.columns) {
      const std::string body = plain_values(c, begin, end);
      ThriftWriter h;
      h.begin_struct();
      h.field_i32(1, kPageData);
      h.field_i32(2, checked_i32(body.size()));
      h.field_i32(3, checked_i32(body.size()));
      h.field_struct(5);
      h.field_i32(1, checked_i32(end - begin));
      h.field_i32(2, kEncodingPlain);
      h.field_i32(3, kEncodingRle);
      h.field_i32(4, kEncodingRle);
      h.end_struct();
      h.end_struct();
      ChunkInfo info;
      info.offset = static_cast<std::int64_t>(out.size());
      info.num_values = static_cast<std::int64_t>(end - begin);
      info.total_size = static_cast<std::int64_t>(h.buf().size() + body.size());
      out += h.buf();
      out += body;
      chunks.push_back(info);
    }
    groups.push_back(std::move(chunks));
  }

  ThriftWriter m;
  m.begin_struct();
  m.field_i32(1, 1);  // version
  m.field_list(2, kStruct, table.columns.size() + 1);
  m.elem_struct();
  m.field_string(4, "schema");
  m.field_i32(5, static_cast<std::int32_t>(table.columns.size()));
  m.end_struct();
  for (const auto& c : table.columns) {
    m.elem_struct();
    m.field_i32(1, is_string(c) ? kTypeByteArray : kTypeInt64);
    m.field_i32(3, kRequired);
    m.field_string(4, c.name);
    if (is_string(c)) m.field_i32(6, kConvertedUtf8);
    m.end_struct();
  }
  m.field_i64(3, static_cast<std::int64_t>(rows));
  m.field_list(4, kStruct, groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    m.elem_struct();
    m.field_list(1, kStruct, table.columns.size());
    std::int64_t total = 0;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      const ChunkInfo& info = groups[g][i];
      total += info.total_size;
      m.elem_struct();
      m.field_i64(2, info.offset);
      write_column_meta(m, table.columns[i], info);
      m.end_struct();
    }
    m.field_i64(2, total);
    m.field_i64(3, groups[g].front().num_values);
    m.end_struct();
  }
  m.field_string(6, "nascar");
  m.end_struct();

  out += m.buf();
  put_u32(out, static_cast<std::uint32_t>(m.buf().size()));
  out += kMagic;
  return out;
}

Table read(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != kMagic || bytes.substr(bytes.size() - 4) != kMagic) {
    throw DatasetError("parquet: not a parquet file");
  }
  const std::uint32_t meta_len = get_u32(bytes, bytes.size() - 8);
  if (meta_len > bytes.size() - 12) throw DatasetError("parquet: corrupt footer length");
  const std::size_t meta_pos = bytes.size() - 8 - meta_len;
  ThriftReader r(bytes.substr(0, bytes.size() - 8), meta_pos);
  const Value meta = r.read_struct();

  const auto& schema = meta.require(2, "schema").list;
  if (schema.empty()) throw DatasetError("parquet: empty schema");
  Table table;
  for (std::size_t i = 1; i < schema.size(); ++i) {
    const Value& el = schema[i];
    if (el.field(5) != nullptr) throw DatasetError("parquet: nested columns are not supported");
    const Value* rep = el.field(3);
    if (rep == nullptr || rep->i != kRequired) throw DatasetError("parquet: only required columns are supported");
    Table::Column c;
    c.name = el.require(4, "column name").s;
    const std::int64_t type = el.require(1, "column type").i;
    if (type == kTypeByteArray) {
      c.values = std::vector<std::string>{};
    } else if (type == kTypeInt64) {
      c.values = std::vector<std::int64_t>{};
    } else {
      throw DatasetError("parquet: unsupported physical type for column " + c.name);
    }
    table.columns.push_back(std::move(c));
  }
  if (static_cast<std::int64_t>(schema.size() - 1) != schema.front().require(5, "num_children").i) {
    throw DatasetError("parquet: nested schema is not supported");
  }

  const Value* groups = meta.field(4);
  if (groups != nullptr) {
    for (const Value& group : groups->list) {
      const auto& chunks = group.require(1, "column chunks").list;
      if (chunks.size() != table.columns.size()) throw DatasetError("parquet: row group column count mismatch");
      for (std::size_t ci = 0; ci < chunks.size(); ++ci) {
        Table::Column& col = table.columns[ci];
        const Value& cm = chunks[ci].require(3, "column metadata");
        if (cm.require(4, "codec").i != kCodecUncompressed) {
          throw DatasetError("parquet: compressed column chunks are not supported");
        }
        if (cm.field(11) != nullptr) throw DatasetError("parquet: dictionary pages are not supported");
        std::int64_t remaining = cm.require(5, "num_values").i;
        std::int64_t pos = cm.require(9, "data_page_offset").i;
        while (remaining > 0) {
          if (pos < 0 || static_cast<std::size_t>(pos) >= meta_pos) throw DatasetError("parquet: page offset out of range");
          ThriftReader hr(bytes.substr(0, meta_pos), static_cast<std::size_t>(pos));
          const Value header = hr.read_struct();
          if (header.require(1, "page type").i != kPageData) throw DatasetError("parquet: unsupported page type");
          const std::int64_t size = header.require(3, "page size").i;
          const Value& dp = header.require(5, "data page header");
          const std::int64_t n = dp.require(1, "num_values").i;
          if (dp.require(2, "encoding").i != kEncodingPlain) throw DatasetError("parquet: only PLAIN encoding is supported");
          std::size_t p = hr.pos();
          if (size < 0 || n < 0 || n > remaining || static_cast<std::uint64_t>(size) > meta_pos - p) {
            throw DatasetError("parquet: corrupt page header");
          }
          const std::size_t end = p + static_cast<std::size_t>(size);
          if (auto* s = std::get_if<std::vector<std::string>>(&col.values)) {
            for (std::int64_t k = 0; k < n; ++k) {
              if (end - p < 4) throw DatasetError("parquet: truncated page");
              const std::uint32_t len = get_u32(bytes, p);
              p += 4;
              if (len > end - p) throw DatasetError("parquet: truncated page");
              s->emplace_back(bytes.substr(p, len));
              p += len;
            }
          } else {
            auto& v = std::get<std::vector<std::int64_t>>(col.values);
            if (static_cast<std::uint64_t>(n) * 8 > end - p) throw DatasetError("parquet: truncated page");
            for (std::int64_t k = 0; k < n; ++k, p += 8) v.push_back(static_cast<std::int64_t>(get_u64(bytes, p)));
          }
          remaining -= n;
          pos = static_cast<std::int64_t>(end);
        }
      }
    }
  }
  for (const auto& c : table.columns) {
    if (column_size(c) != table.num_rows()) throw DatasetError("parquet: ragged columns");
  }
  if (static_cast<std::int64_t>(table.num_rows()) != meta.require(3, "num_rows").i) {
    throw DatasetError("parquet: row count mismatch");
  }
  return table;
}

}  // namespace nascar::parquet
