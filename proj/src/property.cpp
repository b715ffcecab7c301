#include "lpm/property.hpp"

#include <algorithm>
#include <sstream>

#include "lpm/error.hpp"

namespace lpm {

std::optional<std::int64_t> OrdinalScale::rank_of(std::string_view label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::int64_t>(it - labels.begin());
}

Ordinal OrdinalScale::value(std::string_view label) const {
  auto rank = rank_of(label);
  if (!rank) throw ConfigError("event_log", "label '" + std::string(label) + "' is not on ordinal scale '" + name + "'");
  return Ordinal{name, std::string(label), *rank};
}

std::optional<double> numeric_value(const PropertyValue& value) {
  if (auto i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  if (auto d = std::get_if<double>(&value)) return *d;
  return std::nullopt;
}

std::partial_ordering compare(const PropertyValue& a, const PropertyValue& b) {
  auto na = numeric_value(a), nb = numeric_value(b);
  if (na && nb) return *na <=> *nb;
  if (a.index() != b.index()) {
    throw ConfigError("event_log", "cannot compare " + std::string(kind_name(a)) + " with " +
                                       std::string(kind_name(b)));
  }
  return std::visit(
      [&](const auto& lhs) -> std::partial_ordering {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b);
        if constexpr (std::is_same_v<T, Ordinal>) {
          if (lhs.scale != rhs.scale) {
            throw ConfigError("event_log", "ordinal values from scales '" + lhs.scale + "' and '" + rhs.scale +
                                               "' are incomparable");
          }
          return lhs.rank <=> rhs.rank;
        } else if constexpr (std::is_same_v<T, bool>) {
          return static_cast<int>(lhs) <=> static_cast<int>(rhs);
        } else {
          return lhs <=> rhs;
        }
      },
      a);
}

std::string to_string(const PropertyValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream out;
          out.precision(17);
          out << v;
          return out.str();
        } else if constexpr (std::is_same_v<T, Timestamp>) {
          return format_iso8601(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return v.label;
        }
      },
      value);
}

std::string_view kind_name(const PropertyValue& value) {
  static constexpr std::string_view names[] = {"string", "int", "float", "date", "boolean", "ordinal"};
  return names[value.index()];
}

}  // namespace lpm
