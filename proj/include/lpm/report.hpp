#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"
#include "lpm/discovery.hpp"
#include "lpm/utility.hpp"

namespace lpm {

/// What produced a ranking, echoed into every report for reproducibility.
struct RunInfo {
  std::string input;
  std::size_t traces = 0;
  std::size_t events = 0;
  nlohmann::json utility_spec = nlohmann::json::object();
  DiscoveryParams params;
  bool prune_zero_utility = true;
  /// First line of the text report when set; everything else is a function of the inputs.
  std::optional<std::string> generated_at;
};

std::string format_number(double value);

/// Per-term values and the composite score of one evaluation.
void write_breakdown(std::ostream& out, const EvaluationResult& result);

void write_text_report(std::ostream& out, const Ranking& ranking, const RunInfo& info);
nlohmann::json ranking_to_json(const Ranking& ranking, const RunInfo& info);
nlohmann::json evaluation_to_json(const EvaluationResult& result);

struct ExportToggles {
  bool dot = true;
  bool pnml = true;
  bool report = true;
};

/// Writes report.txt, scores.json and rank_NN.{dot,pnml} into `directory`,
/// creating it when needed. scores.json is always written.
void export_ranking(const std::filesystem::path& directory, const Ranking& ranking, const RunInfo& info,
                    const ExportToggles& toggles);

}  // namespace lpm
