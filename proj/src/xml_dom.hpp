#pragma once

// Minimal element tree built on expat. Internal to the library.

#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace lpm::xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<std::unique_ptr<Element>> children;
  std::string text;
  long line = 0;

  const std::string* attribute(std::string_view key) const;
  const Element* child(std::string_view name) const;
  std::vector<const Element*> children_named(std::string_view name) const;
  /// Text of a direct <text> child, as used throughout PNML.
  std::string text_child() const;
};

/// Parses the whole document. Throws ParseError tagged with `module` and
/// `source` on malformed XML.
std::unique_ptr<Element> parse(std::istream& in, const std::string& module, const std::string& source);

/// Escapes &, <, >, " and ' for attribute and text content.
std::string escape(std::string_view text);

}  // namespace lpm::xml
