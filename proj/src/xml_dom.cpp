#include "xml_dom.hpp"

#include <expat.h>

#include <algorithm>

#include "lpm/error.hpp"

namespace lpm::xml {

const std::string* Element::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes)
    if (k == key) return &v;
  return nullptr;
}

const Element* Element::child(std::string_view child_name) const {
  for (const auto& c : children)
    if (c->name == child_name) return c.get();
  return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view child_name) const {
  std::vector<const Element*> out;
  for (const auto& c : children)
    if (c->name == child_name) out.push_back(c.get());
  return out;
}

std::string Element::text_child() const {
  const Element* t = child("text");
  if (!t) return {};
  std::string s = t->text;
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

namespace {

struct Builder {
  XML_Parser parser;
  std::unique_ptr<Element> root;
  std::vector<Element*> stack;
};

void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto* b = static_cast<Builder*>(data);
  auto element = std::make_unique<Element>();
  element->name = name;
  element->line = static_cast<long>(XML_GetCurrentLineNumber(b->parser));
  for (int i = 0; attrs[i]; i += 2) element->attributes.emplace_back(attrs[i], attrs[i + 1]);
  Element* raw = element.get();
  if (b->stack.empty()) {
    b->root = std::move(element);
  } else {
    b->stack.back()->children.push_back(std::move(element));
  }
  b->stack.push_back(raw);
}

void on_end(void* data, const XML_Char*) {
  static_cast<Builder*>(data)->stack.pop_back();
}

void on_text(void* data, const XML_Char* s, int len) {
  auto* b = static_cast<Builder*>(data);
  if (!b->stack.empty()) b->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

}  // namespace

std::unique_ptr<Element> parse(std::istream& in, const std::string& module, const std::string& source) {
  Builder b;
  b.parser = XML_ParserCreate("UTF-8");
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> guard(b.parser, &XML_ParserFree);
  XML_SetUserData(b.parser, &b);
  XML_SetElementHandler(b.parser, on_start, on_end);
  XML_SetCharacterDataHandler(b.parser, on_text);

  char buffer[1 << 16];
  bool done = false;
  while (!done) {
    in.read(buffer, sizeof buffer);
    auto n = in.gcount();
    done = n < static_cast<std::streamsize>(sizeof buffer);
    if (XML_Parse(b.parser, buffer, static_cast<int>(n), done) == XML_STATUS_ERROR) {
      throw ParseError(module, source + ":" + std::to_string(XML_GetCurrentLineNumber(b.parser)) +
                                   ": malformed XML: " + XML_ErrorString(XML_GetErrorCode(b.parser)));
    }
  }
  if (!b.root) throw ParseError(module, source + ": empty XML document");
  return std::move(b.root);
}

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace lpm::xml
