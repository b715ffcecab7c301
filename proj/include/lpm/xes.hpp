#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "lpm/event_log.hpp"

namespace lpm {

struct XesOptions {
  /// String attributes with these keys are read as ordinals on the given scale.
  std::map<std::string, OrdinalScale, std::less<>> ordinal_properties;
  /// Used in error messages.
  std::string source = "<xes>";
};

/// Reads the log/trace/event subset of XES with string, date, int, float,
/// boolean and id attributes. `concept:name` becomes the activity (or the
/// trace id), `time:timestamp` the event time, `identity:id` the event id;
/// every other top-level attribute becomes a property. Nested attributes,
/// globals, classifiers and extensions are skipped.
EventLog parse_xes(std::istream& in, const XesOptions& options = {});

void write_xes(std::ostream& out, const EventLog& log);

}  // namespace lpm
