#include "lpm/xes.hpp"

#include <expat.h>

#include <charconv>
#include <cstring>
#include <memory>
#include <optional>

#include "lpm/error.hpp"
#include "xml_dom.hpp"

namespace lpm {
namespace {

constexpr const char* kModule = "event_log";

struct PendingEvent {
  Event event;
  bool has_activity = false;
  bool has_time = false;
  bool has_id = false;
  long line = 0;
};

struct XesReader {
  XML_Parser parser = nullptr;
  const XesOptions* options = nullptr;
  std::vector<Trace> traces;

  bool in_log = false;
  int skip_depth = 0;       // inside <global>, <classifier>, nested attributes, ...
  bool in_trace = false;
  bool in_event = false;
  Trace trace;
  bool trace_has_name = false;
  std::vector<PendingEvent> events;
  PendingEvent current;

  std::string where() const {
    return options->source + ":" + std::to_string(XML_GetCurrentLineNumber(parser));
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(kModule, where() + ": " + message); }

  PropertyValue convert(std::string_view type, const std::string& key, const std::string& value) {
    if (type == "string" || type == "id") {
      auto it = options->ordinal_properties.find(key);
      if (it != options->ordinal_properties.end()) {
        auto rank = it->second.rank_of(value);
        if (!rank) fail("value '" + value + "' of '" + key + "' is not on ordinal scale '" + it->second.name + "'");
        return Ordinal{it->second.name, value, *rank};
      }
      return value;
    }
    if (type == "int") {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size()) fail("bad int value '" + value + "' for '" + key + "'");
      return v;
    }
    if (type == "float") {
      try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      } catch (const std::exception&) {
        fail("bad float value '" + value + "' for '" + key + "'");
      }
    }
    if (type == "date") {
      auto t = parse_iso8601(value);
      if (!t) fail("bad date value '" + value + "' for '" + key + "'");
      return *t;
    }
    if (type == "boolean") {
      if (value == "true") return true;
      if (value == "false") return false;
      fail("bad boolean value '" + value + "' for '" + key + "'");
    }
    fail("unsupported attribute type '" + std::string(type) + "'");
  }

  static bool is_attribute(std::string_view n) {
    return n == "string" || n == "date" || n == "int" || n == "float" || n == "boolean" || n == "id" ||
           n == "list" || n == "container";
  }

  void start(std::string_view name, const XML_Char** attrs) {
    if (skip_depth > 0) {
      ++skip_depth;
      return;
    }
    if (!in_log) {
      if (name != "log") fail("expected <log> root element, found <" + std::string(name) + ">");
      in_log = true;
      return;
    }
    if (name == "trace") {
      if (in_trace) fail("nested <trace>");
      in_trace = true;
      trace = Trace{};
      trace_has_name = false;
      events.clear();
      return;
    }
    if (name == "event") {
      if (!in_trace) fail("<event> outside of a <trace>");
      if (in_event) fail("nested <event>");
      in_event = true;
      current = PendingEvent{};
      current.line = static_cast<long>(XML_GetCurrentLineNumber(parser));
      return;
    }
    if (is_attribute(name)) {
      // Nested children of this attribute are not interpreted.
      skip_depth = 1;
      if (!in_trace || name == "list" || name == "container") return;
      const char* key = nullptr;
      const char* value = nullptr;
      for (int i = 0; attrs[i]; i += 2) {
        if (std::strcmp(attrs[i], "key") == 0) key = attrs[i + 1];
        if (std::strcmp(attrs[i], "value") == 0) value = attrs[i + 1];
      }
      if (!key || !value) fail("attribute element without key/value");
      attribute(name, key, value);
      return;
    }
    // <global>, <classifier>, <extension> and unknown elements.
    skip_depth = 1;
  }

  void attribute(std::string_view type, const std::string& key, const std::string& value) {
    if (in_event) {
      if (key == "concept:name") {
        current.event.activity = value;
        current.has_activity = true;
      } else if (key == "time:timestamp") {
        if (type != "date") fail("time:timestamp must be a date attribute");
        current.event.time = std::get<Timestamp>(convert(type, key, value));
        current.has_time = true;
      } else if (key == "identity:id") {
        current.event.id = value;
        current.has_id = true;
      } else {
        current.event.props.insert_or_assign(key, convert(type, key, value));
      }
    } else {
      if (key == "concept:name") {
        trace.id = value;
        trace_has_name = true;
      }
      trace.case_props.insert_or_assign(key, convert(type, key, value));
    }
  }

  void end(std::string_view name) {
    if (skip_depth > 0) {
      --skip_depth;
      return;
    }
    if (name == "event") {
      events.push_back(std::move(current));
      in_event = false;
    } else if (name == "trace") {
      finish_trace();
      in_trace = false;
    } else if (name == "log") {
      in_log = false;
    }
  }

  void finish_trace() {
    if (!trace_has_name) trace.id = std::to_string(traces.size() + 1);
    std::string label = "trace '" + trace.id + "'";
    if (events.empty()) fail(label + " has no events");
    for (std::size_t i = 0; i < events.size(); ++i) {
      auto& p = events[i];
      std::string at = options->source + ":" + std::to_string(p.line) + ": " + label + " event " + std::to_string(i);
      if (!p.has_activity) throw ParseError(kModule, at + ": missing concept:name");
      if (!p.has_time) throw ParseError(kModule, at + ": missing time:timestamp");
      if (i > 0 && p.event.time < events[i - 1].event.time) {
        throw ParseError(kModule, at + ": timestamp earlier than its predecessor");
      }
      if (!p.has_id) p.event.id = trace.id + "#" + std::to_string(i + 1);
      trace.events.push_back(std::move(p.event));
    }
    traces.push_back(std::move(trace));
  }
};

void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  static_cast<XesReader*>(data)->start(name, attrs);
}

void on_end(void* data, const XML_Char* name) { static_cast<XesReader*>(data)->end(name); }

}  // namespace

EventLog parse_xes(std::istream& in, const XesOptions& options) {
  XesReader reader;
  reader.options = &options;
  reader.parser = XML_ParserCreate("UTF-8");
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> guard(reader.parser,
                                                                                       &XML_ParserFree);
  XML_SetUserData(reader.parser, &reader);
  XML_SetElementHandler(reader.parser, on_start, on_end);

  char buffer[1 << 16];
  bool done = false;
  while (!done) {
    in.read(buffer, sizeof buffer);
    auto n = in.gcount();
    done = n < static_cast<std::streamsize>(sizeof buffer);
    if (XML_Parse(reader.parser, buffer, static_cast<int>(n), done) == XML_STATUS_ERROR) {
      throw ParseError(kModule, reader.where() + ": malformed XML: " +
                                    XML_ErrorString(XML_GetErrorCode(reader.parser)));
    }
  }
  try {
    return EventLog(std::move(reader.traces));
  } catch (const ParseError& e) {
    throw ParseError(kModule, options.source + ": " + std::string(e.what()).substr(std::strlen("[event_log] ")));
  }
}

namespace {

void write_attribute(std::ostream& out, const std::string& indent, const std::string& key,
                     const PropertyValue& value) {
  std::string_view tag;
  switch (value.index()) {
    case 1: tag = "int"; break;
    case 2: tag = "float"; break;
    case 3: tag = "date"; break;
    case 4: tag = "boolean"; break;
    default: tag = "string";
  }
  out << indent << '<' << tag << " key=\"" << xml::escape(key) << "\" value=\"" << xml::escape(to_string(value))
      << "\"/>\n";
}

}  // namespace

void write_xes(std::ostream& out, const EventLog& log) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<log xes.version=\"1.0\" xes.features=\"\" xmlns=\"http://www.xes-standard.org/\">\n"
         "  <extension name=\"Concept\" prefix=\"concept\" uri=\"http://www.xes-standard.org/concept.xesext\"/>\n"
         "  <extension name=\"Time\" prefix=\"time\" uri=\"http://www.xes-standard.org/time.xesext\"/>\n"
         "  <extension name=\"Identity\" prefix=\"identity\" uri=\"http://www.xes-standard.org/identity.xesext\"/>\n";
  for (const auto& trace : log.traces()) {
    out << "  <trace>\n";
    if (!trace.case_props.count("concept:name")) write_attribute(out, "    ", "concept:name", trace.id);
    for (const auto& [key, value] : trace.case_props) write_attribute(out, "    ", key, value);
    for (const auto& e : trace.events) {
      out << "    <event>\n";
      write_attribute(out, "      ", "identity:id", e.id);
      write_attribute(out, "      ", "concept:name", e.activity);
      write_attribute(out, "      ", "time:timestamp", e.time);
      for (const auto& [key, value] : e.props) write_attribute(out, "      ", key, value);
      out << "    </event>\n";
    }
    out << "  </trace>\n";
  }
  out << "</log>\n";
}

}  // namespace lpm
