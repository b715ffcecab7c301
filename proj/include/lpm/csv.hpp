#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "lpm/event_log.hpp"

namespace lpm {

enum class ColumnKind { text, integer, real, timestamp, boolean, ordinal };

struct PropertyColumn {
  std::string column;
  std::string property;  // defaults to the column name when empty
  ColumnKind kind = ColumnKind::text;
  std::string ordinal_scale;  // for ColumnKind::ordinal
  bool case_level = false;    // becomes a case property instead of an event property
};

/// Which CSV columns carry what. Timestamps are parsed with `timestamp_format`
/// only; there is no format guessing.
struct CsvMapping {
  std::string case_column;
  std::string activity_column;
  std::string timestamp_column;
  std::string event_id_column;  // optional
  std::string timestamp_format = "%Y-%m-%dT%H:%M:%S";
  char delimiter = ',';
  std::vector<PropertyColumn> properties;
  std::map<std::string, OrdinalScale, std::less<>> ordinal_scales;
  std::string source = "<csv>";
};

/// Groups rows by case id (cases in order of first appearance) and sorts each
/// trace by timestamp, keeping file order on ties. Empty property cells are
/// treated as absent.
EventLog parse_csv(std::istream& in, const CsvMapping& mapping);

/// Writes the log in the layout described by `mapping`, one row per event.
void write_csv(std::ostream& out, const EventLog& log, const CsvMapping& mapping);

ColumnKind column_kind_from_string(const std::string& name);

}  // namespace lpm
