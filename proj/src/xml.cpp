#include "xml.hpp"

#include <expat.h>

#include <limits>
#include <memory>

#include "nascar/errors.hpp"

namespace nascar::detail {

namespace {

std::string local_name(const XML_Char* name) {
  std::string_view n(name);
  const auto colon = n.rfind(':');
  return std::string(colon == std::string_view::npos ? n : n.substr(colon + 1));
}

struct Builder {
  XML_Parser parser = nullptr;
  XmlElement root;
  bool have_root = false;
  std::vector<XmlElement*> stack;

  static void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
    auto* self = static_cast<Builder*>(data);
    XmlElement* el = nullptr;
    if (self->stack.empty()) {
      el = &self->root;
      self->have_root = true;
    } else {
      el = &self->stack.back()->children.emplace_back();
    }
    el->name = local_name(name);
    el->line = static_cast<long>(XML_GetCurrentLineNumber(self->parser));
    el->column = static_cast<long>(XML_GetCurrentColumnNumber(self->parser)) + 1;
    for (const XML_Char** a = atts; a && *a; a += 2) el->attributes.emplace_back(local_name(a[0]), a[1]);
    self->stack.push_back(el);
  }

  static void on_end(void* data, const XML_Char*) { static_cast<Builder*>(data)->stack.pop_back(); }

  static void on_text(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<Builder*>(data);
    if (!self->stack.empty()) self->stack.back()->text.append(s, static_cast<std::size_t>(len));
  }
};

}  // namespace

const std::string* XmlElement::attr(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

XmlElement parse_xml(std::string_view xml, std::string_view source_name) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"),
                                                                                       &XML_ParserFree);
  if (!parser) throw Error("XML_ParserCreate failed");
  Builder b;
  b.parser = parser.get();
  XML_SetUserData(parser.get(), &b);
  XML_SetElementHandler(parser.get(), &Builder::on_start, &Builder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &Builder::on_text);

  constexpr std::size_t kChunk = std::numeric_limits<int>::max() / 2;
  std::size_t off = 0;
  do {
    const std::size_t n = std::min(kChunk, xml.size() - off);
    const bool last = off + n == xml.size();
    if (XML_Parse(parser.get(), xml.data() + off, static_cast<int>(n), last) == XML_STATUS_ERROR) {
      throw ReportParseError(std::string(source_name), static_cast<long>(XML_GetCurrentLineNumber(parser.get())),
                             static_cast<long>(XML_GetCurrentColumnNumber(parser.get())) + 1,
                             XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
    off += n;
  } while (off < xml.size());
  if (!b.have_root) throw ReportParseError(std::string(source_name), 1, 1, "no element found");
  return std::move(b.root);
}

}  // namespace nascar::detail
