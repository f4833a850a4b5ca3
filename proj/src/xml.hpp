#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nascar::detail {

/// Minimal DOM built on expat; enough for analyzer reports.
struct XmlElement {
  /// Local name (any namespace prefix removed).
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  /// Concatenated character data of this element (not of its children).
  std::string text;
  std::vector<XmlElement> children;
  long line = 0;
  long column = 0;

  const std::string* attr(std::string_view key) const;
};

/// Throws ReportParseError naming `source_name` with expat's line/column.
XmlElement parse_xml(std::string_view xml, std::string_view source_name);

}  // namespace nascar::detail
