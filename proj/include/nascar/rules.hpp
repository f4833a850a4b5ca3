#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "nascar/warning.hpp"

namespace nascar {

/// The rule ids one tool can report, with the category each belongs to.
struct RuleUniverse {
  Tool tool = Tool::Builtin;
  std::set<std::string> rule_ids;
  std::map<std::string, std::string, std::less<>> category_of;

  std::size_t size() const noexcept { return rule_ids.size(); }
  bool contains(std::string_view rule) const { return rule_ids.contains(std::string(rule)); }
  /// Category of a rule, or an empty string when unknown.
  std::string_view category(std::string_view rule) const;
};

/// Parses a rule manifest: UTF-8, one rule id per line, `#` comments. A
/// comment of the form `# category: <name>` assigns <name> to the ids that follow.
RuleUniverse parse_rule_manifest(std::string_view text, Tool tool);

/// Universes compiled in from data/rules/: 283 PMD rules (Documentation
/// excluded), 490 SpotBugs bug patterns, and the built-in analyzer's rules.
const RuleUniverse& bundled_universe(Tool tool);

}  // namespace nascar
