#include "lpm/run_config.hpp"

#include <fstream>
#include <set>

#include "lpm/error.hpp"

namespace lpm {
namespace {

constexpr const char* kModule = "config";
using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(kModule, where + ": " + what);
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
}

std::string get_string(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_string()) fail(where + "." + key, "expected a string");
  return j.at(key).get<std::string>();
}

bool get_bool(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_boolean()) fail(where + "." + key, "expected true or false");
  return j.at(key).get<bool>();
}

std::size_t get_count(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number_unsigned()) fail(where + "." + key, "expected a non-negative integer");
  return j.at(key).get<std::size_t>();
}

std::map<std::string, OrdinalScale, std::less<>> parse_scales(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object of name -> [labels]");
  std::map<std::string, OrdinalScale, std::less<>> out;
  for (const auto& [name, labels] : j.items()) {
    if (!labels.is_array() || labels.empty()) fail(where + "." + name, "expected a non-empty list of labels");
    OrdinalScale scale{name, {}};
    for (const auto& l : labels) {
      if (!l.is_string()) fail(where + "." + name, "labels must be strings");
      scale.labels.push_back(l.get<std::string>());
    }
    out.emplace(name, std::move(scale));
  }
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

LogFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? LogFormat::csv : LogFormat::xes;
}

LogFormat format_from_string(const std::string& name) {
  if (name == "xes") return LogFormat::xes;
  if (name == "csv") return LogFormat::csv;
  fail("input.format", "expected 'xes' or 'csv', got '" + name + "'");
}

CsvMapping parse_csv_mapping(const json& j) {
  const std::string where = "input.csv";
  check_keys(j, {"case", "activity", "timestamp", "event_id", "timestamp_format", "delimiter", "properties",
                 "ordinal_scales"},
             where);
  CsvMapping m;
  for (const char* key : {"case", "activity", "timestamp"})
    if (!j.contains(key)) fail(where, std::string("missing '") + key + "' column");
  m.case_column = get_string(j, "case", where);
  m.activity_column = get_string(j, "activity", where);
  m.timestamp_column = get_string(j, "timestamp", where);
  if (j.contains("event_id")) m.event_id_column = get_string(j, "event_id", where);
  if (j.contains("timestamp_format")) m.timestamp_format = get_string(j, "timestamp_format", where);
  if (j.contains("delimiter")) {
    std::string d = get_string(j, "delimiter", where);
    if (d.size() != 1) fail(where + ".delimiter", "expected a single character");
    m.delimiter = d[0];
  }
  if (j.contains("ordinal_scales")) m.ordinal_scales = parse_scales(j.at("ordinal_scales"), where + ".ordinal_scales");
  if (j.contains("properties")) {
    if (!j.at("properties").is_array()) fail(where + ".properties", "expected a list");
    for (std::size_t i = 0; i < j.at("properties").size(); ++i) {
      const json& p = j.at("properties")[i];
      std::string at = where + ".properties[" + std::to_string(i) + "]";
      check_keys(p, {"column", "property", "kind", "ordinal_scale", "case_level"}, at);
      if (!p.contains("column")) fail(at, "missing 'column'");
      PropertyColumn col;
      col.column = get_string(p, "column", at);
      if (p.contains("property")) col.property = get_string(p, "property", at);
      if (p.contains("kind")) {
        try {
          col.kind = column_kind_from_string(get_string(p, "kind", at));
        } catch (const Error& e) {
          fail(at + ".kind", e.what());
        }
      }
      if (p.contains("ordinal_scale")) col.ordinal_scale = get_string(p, "ordinal_scale", at);
      if (p.contains("case_level")) col.case_level = get_bool(p, "case_level", at);
      m.properties.push_back(std::move(col));
    }
  }
  return m;
}

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base) {
  check_keys(doc, {"input", "utility_spec", "discovery", "output"}, "config");
  RunConfig c;

  if (!doc.contains("input")) fail("config", "missing 'input'");
  const json& in = doc.at("input");
  check_keys(in, {"path", "format", "csv", "ordinal_properties"}, "input");
  if (!in.contains("path")) fail("input", "missing 'path'");
  c.input.path = resolve(base, get_string(in, "path", "input"));
  c.input.format = in.contains("format") ? format_from_string(get_string(in, "format", "input"))
                                         : format_from_path(c.input.path);
  if (in.contains("csv")) c.input.csv = parse_csv_mapping(in.at("csv"));
  else if (c.input.format == LogFormat::csv) fail("input", "CSV input needs a 'csv' column mapping");
  if (in.contains("ordinal_properties"))
    c.input.ordinal_properties = parse_scales(in.at("ordinal_properties"), "input.ordinal_properties");

  if (!doc.contains("utility_spec")) fail("config", "missing 'utility_spec'");
  c.utility_spec = resolve(base, get_string(doc, "utility_spec", "config"));

  if (doc.contains("discovery")) {
    const json& d = doc.at("discovery");
    const std::string where = "discovery";
    check_keys(d, {"max_activities", "top_k", "beam_width", "budget", "workers", "cooccurrence_prefilter",
                   "prune_zero_utility", "prune_model_constraints"},
               where);
    auto& p = c.discovery;
    if (d.contains("max_activities")) p.max_activities = get_count(d, "max_activities", where);
    if (d.contains("top_k")) p.top_k = get_count(d, "top_k", where);
    if (d.contains("beam_width")) p.beam_width = get_count(d, "beam_width", where);
    if (d.contains("budget")) p.budget = get_count(d, "budget", where);
    if (d.contains("workers")) p.workers = get_count(d, "workers", where);
    if (d.contains("cooccurrence_prefilter")) p.cooccurrence_prefilter = get_bool(d, "cooccurrence_prefilter", where);
    if (d.contains("prune_zero_utility")) c.prune_zero_utility = get_bool(d, "prune_zero_utility", where);
    if (d.contains("prune_model_constraints"))
      p.prune_model_constraints = get_bool(d, "prune_model_constraints", where);
    if (p.max_activities < 2 || p.max_activities > 5) fail("discovery.max_activities", "must be between 2 and 5");
    if (p.beam_width == 0) fail("discovery.beam_width", "must be positive");
  }

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    check_keys(o, {"directory", "dot", "pnml", "report"}, "output");
    if (o.contains("directory")) c.output_directory = resolve(base, get_string(o, "directory", "output"));
    if (o.contains("dot")) c.exports.dot = get_bool(o, "dot", "output");
    if (o.contains("pnml")) c.exports.pnml = get_bool(o, "pnml", "output");
    if (o.contains("report")) c.exports.report = get_bool(o, "report", "output");
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(kModule, path.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(kModule, path.string() + ": " + e.what());
  }
  try {
    return parse_run_config(doc, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(kModule, path.string() + ": " + std::string(e.what()).substr(e.module().size() + 3));
  }
}

EventLog load_log(const InputConfig& input) {
  std::ifstream in(input.path, std::ios::binary);
  if (!in) throw Error("event_log", input.path.string() + ": cannot open input log");
  if (input.format == LogFormat::csv) {
    CsvMapping m = input.csv;
    m.source = input.path.string();
    return parse_csv(in, m);
  }
  XesOptions options;
  options.ordinal_properties = input.ordinal_properties;
  options.source = input.path.string();
  return parse_xes(in, options);
}

}  // namespace lpm
