#include "lpm/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <unordered_map>

#include "lpm/error.hpp"

namespace lpm {
namespace {

constexpr const char* kModule = "event_log";

// Reads one RFC 4180 record. Returns false at end of input.
bool read_record(std::istream& in, char delimiter, std::vector<std::string>& fields, long& line) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '\n') {
      ++line;
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return true;
}

std::string quote(const std::string& value, char delimiter) {
  if (value.find_first_of(std::string("\"\n\r") + delimiter) == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Row {
  std::size_t order;
  Event event;
};

}  // namespace

ColumnKind column_kind_from_string(const std::string& name) {
  if (name == "text" || name == "string") return ColumnKind::text;
  if (name == "integer" || name == "int") return ColumnKind::integer;
  if (name == "real" || name == "float") return ColumnKind::real;
  if (name == "timestamp" || name == "date") return ColumnKind::timestamp;
  if (name == "boolean") return ColumnKind::boolean;
  if (name == "ordinal") return ColumnKind::ordinal;
  throw ConfigError(kModule, "unknown column type '" + name + "'");
}

EventLog parse_csv(std::istream& in, const CsvMapping& mapping) {
  std::vector<std::string> header;
  long line = 1;
  if (!read_record(in, mapping.delimiter, header, line)) {
    throw ParseError(kModule, mapping.source + ": header row required");
  }
  auto column = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError(kModule, mapping.source + ": missing mapped column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t case_col = column(mapping.case_column);
  const std::size_t activity_col = column(mapping.activity_column);
  const std::size_t time_col = column(mapping.timestamp_column);
  const std::optional<std::size_t> id_col =
      mapping.event_id_column.empty() ? std::nullopt : std::optional(column(mapping.event_id_column));
  struct Bound {
    const PropertyColumn* spec;
    std::size_t index;
    const OrdinalScale* scale = nullptr;
  };
  std::vector<Bound> bound;
  for (const auto& p : mapping.properties) {
    Bound b{&p, column(p.column)};
    if (p.kind == ColumnKind::ordinal) {
      auto it = mapping.ordinal_scales.find(p.ordinal_scale);
      if (it == mapping.ordinal_scales.end()) {
        throw ConfigError(kModule, mapping.source + ": column '" + p.column + "' uses undeclared ordinal scale '" +
                                       p.ordinal_scale + "'");
      }
      b.scale = &it->second;
    }
    bound.push_back(b);
  }

  std::vector<std::string> case_order;
  std::unordered_map<std::string, std::size_t> case_index;
  std::vector<std::vector<Row>> rows_by_case;
  std::vector<PropertyMap> case_props;

  std::vector<std::string> fields;
  std::size_t row_number = 0;
  while (true) {
    long row_line = line;
    if (!read_record(in, mapping.delimiter, fields, line)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    ++row_number;
    auto at = [&](const std::string& what) {
      return ParseError(kModule, mapping.source + ": row " + std::to_string(row_line) + ": " + what);
    };
    if (fields.size() != header.size()) {
      throw at("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    const std::string& case_id = fields[case_col];
    if (case_id.empty()) throw at("empty case id");
    Event e;
    e.activity = fields[activity_col];
    if (e.activity.empty()) throw at("empty activity");
    auto t = parse_with_format(fields[time_col], mapping.timestamp_format);
    if (!t) throw at("unparseable timestamp '" + fields[time_col] + "' for format '" + mapping.timestamp_format + "'");
    e.time = *t;
    if (id_col) {
      e.id = fields[*id_col];
      if (e.id.empty()) throw at("empty event id");
    }

    auto [it, inserted] = case_index.emplace(case_id, case_order.size());
    if (inserted) {
      case_order.push_back(case_id);
      rows_by_case.emplace_back();
      case_props.emplace_back();
    }
    for (const auto& b : bound) {
      const std::string& cell = fields[b.index];
      if (cell.empty()) continue;
      const std::string& name = b.spec->property.empty() ? b.spec->column : b.spec->property;
      PropertyValue value;
      switch (b.spec->kind) {
        case ColumnKind::text: value = cell; break;
        case ColumnKind::integer: {
          std::int64_t v = 0;
          auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
          if (ec != std::errc() || p != cell.data() + cell.size()) throw at("bad integer '" + cell + "' in '" + b.spec->column + "'");
          value = v;
          break;
        }
        case ColumnKind::real: {
          try {
            std::size_t used = 0;
            value = std::stod(cell, &used);
            if (used != cell.size()) throw std::invalid_argument(cell);
          } catch (const std::exception&) {
            throw at("bad number '" + cell + "' in '" + b.spec->column + "'");
          }
          break;
        }
        case ColumnKind::timestamp: {
          auto ts = parse_with_format(cell, mapping.timestamp_format);
          if (!ts) throw at("unparseable timestamp '" + cell + "' in '" + b.spec->column + "'");
          value = *ts;
          break;
        }
        case ColumnKind::boolean:
          if (cell == "true" || cell == "1") value = true;
          else if (cell == "false" || cell == "0") value = false;
          else throw at("bad boolean '" + cell + "' in '" + b.spec->column + "'");
          break;
        case ColumnKind::ordinal: {
          auto rank = b.scale->rank_of(cell);
          if (!rank) throw at("'" + cell + "' is not on ordinal scale '" + b.scale->name + "'");
          value = Ordinal{b.scale->name, cell, *rank};
          break;
        }
      }
      if (b.spec->case_level) {
        case_props[it->second].try_emplace(name, std::move(value));
      } else {
        e.props.insert_or_assign(name, std::move(value));
      }
    }
    rows_by_case[it->second].push_back(Row{row_number, std::move(e)});
  }

  std::vector<Trace> traces;
  traces.reserve(case_order.size());
  for (std::size_t c = 0; c < case_order.size(); ++c) {
    auto& rows = rows_by_case[c];
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.event.time < b.event.time; });
    Trace trace;
    trace.id = case_order[c];
    trace.case_props = std::move(case_props[c]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].event.id.empty()) rows[i].event.id = trace.id + "#" + std::to_string(i + 1);
      trace.events.push_back(std::move(rows[i].event));
    }
    traces.push_back(std::move(trace));
  }
  return EventLog(std::move(traces));
}

void write_csv(std::ostream& out, const EventLog& log, const CsvMapping& mapping) {
  const char d = mapping.delimiter;
  std::vector<std::string> header{mapping.case_column, mapping.activity_column, mapping.timestamp_column};
  if (!mapping.event_id_column.empty()) header.push_back(mapping.event_id_column);
  for (const auto& p : mapping.properties) header.push_back(p.column);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? std::string(1, d) : "") << quote(header[i], d);
  out << '\n';

  auto render = [&](const PropertyValue* v) -> std::string {
    if (!v) return {};
    if (auto t = std::get_if<Timestamp>(v)) return format_with(*t, mapping.timestamp_format);
    return to_string(*v);
  };
  for (const auto& trace : log.traces()) {
    for (const auto& e : trace.events) {
      out << quote(trace.id, d) << d << quote(e.activity, d) << d << quote(format_with(e.time, mapping.timestamp_format), d);
      if (!mapping.event_id_column.empty()) out << d << quote(e.id, d);
      for (const auto& p : mapping.properties) {
        const std::string& name = p.property.empty() ? p.column : p.property;
        out << d << quote(render(p.case_level ? trace.case_property(name) : e.property(name)), d);
      }
      out << '\n';
    }
  }
}

}  // namespace lpm
