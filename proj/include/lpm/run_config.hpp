#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "lpm/csv.hpp"
#include "lpm/discovery.hpp"
#include "lpm/event_log.hpp"
#include "lpm/report.hpp"
#include "lpm/xes.hpp"

namespace lpm {

enum class LogFormat { xes, csv };

struct InputConfig {
  std::filesystem::path path;
  LogFormat format = LogFormat::xes;
  CsvMapping csv;                                                     // format csv
  std::map<std::string, OrdinalScale, std::less<>> ordinal_properties;  // format xes
};

/// A reproducible analyst run:
///
///     {
///       "input": { "path": "log.csv", "format": "csv",
///                  "csv": { "case": "case", "activity": "activity", "timestamp": "time",
///                           "event_id": "id", "timestamp_format": "%d-%m-%Y %H:%M",
///                           "properties": [ { "column": "cost", "kind": "integer" } ] } },
///       "utility_spec": "spec.json",
///       "discovery": { "max_activities": 4, "top_k": 10 },
///       "output": { "directory": "out", "dot": true, "pnml": true, "report": true }
///     }
///
/// Relative paths are resolved against the config file's directory.
struct RunConfig {
  InputConfig input;
  std::filesystem::path utility_spec;
  DiscoveryParams discovery;
  bool prune_zero_utility = true;
  std::filesystem::path output_directory = "lpm-out";
  ExportToggles exports;
};

/// Throws ConfigError on unknown keys and ill-typed values.
RunConfig parse_run_config(const nlohmann::json& document, const std::filesystem::path& base_directory = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Format from the extension: .csv is CSV, anything else XES.
LogFormat format_from_path(const std::filesystem::path& path);
LogFormat format_from_string(const std::string& name);

/// Reads a CSV mapping object (the "csv" block above).
CsvMapping parse_csv_mapping(const nlohmann::json& j);

EventLog load_log(const InputConfig& input);

}  // namespace lpm
