#include "nascar/rules.hpp"

#include <stdexcept>

#include "nascar/text.hpp"

namespace nascar {

namespace detail {
extern const std::string_view kPmdManifest;
extern const std::string_view kSpotBugsManifest;
extern const std::string_view kBuiltinManifest;
}  // namespace detail

std::string_view RuleUniverse::category(std::string_view rule) const {
  const auto it = category_of.find(rule);
  return it == category_of.end() ? std::string_view{} : std::string_view(it->second);
}

RuleUniverse parse_rule_manifest(std::string_view text, Tool tool) {
  RuleUniverse u;
  u.tool = tool;
  std::string category;
  for (const std::string_view raw : split_lines(text)) {
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      if (body.starts_with("category:")) category = std::string(trim(body.substr(9)));
      continue;
    }
    const std::string id(line);
    u.rule_ids.insert(id);
    if (!category.empty()) u.category_of.emplace(id, category);
  }
  return u;
}

const RuleUniverse& bundled_universe(Tool tool) {
  static const RuleUniverse pmd = parse_rule_manifest(detail::kPmdManifest, Tool::Pmd);
  static const RuleUniverse spotbugs = parse_rule_manifest(detail::kSpotBugsManifest, Tool::SpotBugs);
  static const RuleUniverse builtin = parse_rule_manifest(detail::kBuiltinManifest, Tool::Builtin);
  switch (tool) {
    case Tool::Pmd: return pmd;
    case Tool::SpotBugs: return spotbugs;
    case Tool::Builtin: return builtin;
  }
  throw std::invalid_argument("unknown tool");
}

}  // namespace nascar
