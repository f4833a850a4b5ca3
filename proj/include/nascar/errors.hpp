#pragma once

#include <stdexcept>
#include <string>

namespace nascar {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A git invocation failed (clone, rev-list, diff, ...).
class GitError : public Error {
 public:
  using Error::Error;
};

/// A path does not exist at the requested commit.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// An analyzer report could not be parsed. what() carries `file:line:col: reason`.
class ReportParseError : public Error {
 public:
  ReportParseError(std::string source, long line, long column, const std::string& reason)
      : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + reason),
        source_(std::move(source)),
        line_(line),
        column_(column) {}

  const std::string& source() const noexcept { return source_; }
  long line() const noexcept { return line_; }
  long column() const noexcept { return column_; }

 private:
  std::string source_;
  long line_;
  long column_;
};

class ArchiveError : public Error {
 public:
  using Error::Error;
};

class DatasetError : public Error {
 public:
  using Error::Error;
};

/// Invalid user-supplied configuration; maps to exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nascar
