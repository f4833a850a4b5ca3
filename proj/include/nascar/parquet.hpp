#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nascar::parquet {

/// A flat table whose columns are all REQUIRED: UTF-8 strings or INT64.
struct Table {
  struct Column {
    std::string name;
    std::variant<std::vector<std::string>, std::vector<std::int64_t>> values;
  };
  std::vector<Column> columns;

  std::size_t num_rows() const;
};

/// Serializes to a Parquet file: PLAIN encoding, no compression, one data
/// page per column chunk, row groups of at most `rows_per_group` rows.
std::string write(const Table& table, std::size_t rows_per_group = 65536);

/// Reads files in the subset produced by write(). Throws DatasetError for
/// anything else (compression, dictionary pages, nested or optional columns).
Table read(std::string_view bytes);

}  // namespace nascar::parquet
