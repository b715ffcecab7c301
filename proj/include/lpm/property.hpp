#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lpm/timestamp.hpp"

namespace lpm {

/// A value on a declared ordinal scale. `rank` orders labels within `scale`.
struct Ordinal {
  std::string scale;
  std::string label;
  std::int64_t rank = 0;

  bool operator==(const Ordinal&) const = default;
};

/// A named, totally ordered list of labels; rank is the position in `labels`.
struct OrdinalScale {
  std::string name;
  std::vector<std::string> labels;

  std::optional<std::int64_t> rank_of(std::string_view label) const;
  /// Throws ConfigError when the label is not on the scale.
  Ordinal value(std::string_view label) const;
};

using PropertyValue = std::variant<std::string, std::int64_t, double, Timestamp, bool, Ordinal>;
using PropertyMap = std::map<std::string, PropertyValue, std::less<>>;

/// Integer and real values as double; everything else has no numeric reading.
std::optional<double> numeric_value(const PropertyValue& value);

/// Total order within one kind. Integers and reals compare numerically with
/// each other; ordinals compare by rank within a single scale. Mixing other
/// kinds, or ordinals from different scales, throws ConfigError.
std::partial_ordering compare(const PropertyValue& a, const PropertyValue& b);

std::string to_string(const PropertyValue& value);

/// Name of the alternative held, as used in XES and in CSV mappings:
/// "string", "int", "float", "date", "boolean", "ordinal".
std::string_view kind_name(const PropertyValue& value);

}  // namespace lpm
