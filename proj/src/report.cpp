#include "lpm/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lpm/dot.hpp"
#include "lpm/error.hpp"
#include "lpm/pnml.hpp"

namespace lpm {
namespace {

constexpr const char* kModule = "report";

std::string rank_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "rank_%02zu", index + 1);
  return buf;
}

void write_terms(std::ostream& out, const char* heading, const std::vector<TermValue>& terms, bool boolean) {
  for (const auto& t : terms) {
    out << "    " << heading << ' ' << t.name << " [" << to_string(t.scope) << "] = ";
    if (!t.evaluated) out << "not evaluated";
    else if (boolean) out << (t.value != 0 ? "satisfied" : "violated");
    else out << format_number(t.value);
    out << '\n';
  }
}

nlohmann::json terms_json(const std::vector<TermValue>& terms) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& t : terms) {
    nlohmann::json j{{"name", t.name}, {"scope", std::string(to_string(t.scope))}, {"evaluated", t.evaluated}};
    j["value"] = t.evaluated ? nlohmann::json(t.value) : nlohmann::json(nullptr);
    list.push_back(j);
  }
  return list;
}

nlohmann::json warnings_json(const Warnings& w) {
  return {{"missing_property", w.missing_property},
          {"missing_case_property", w.missing_case_property},
          {"zero_case_property", w.zero_case_property},
          {"zero_duration", w.zero_duration},
          {"undecided_model", w.undecided_model},
          {"undefined_determinism", w.undefined_determinism}};
}

void write_warnings(std::ostream& out, const Warnings& w) {
  if (!w.total()) return;
  out << "    warnings:";
  if (w.missing_property) out << " missing_property=" << w.missing_property;
  if (w.missing_case_property) out << " missing_case_property=" << w.missing_case_property;
  if (w.zero_case_property) out << " zero_case_property=" << w.zero_case_property;
  if (w.zero_duration) out << " zero_duration=" << w.zero_duration;
  if (w.undecided_model) out << " undecided_model=" << w.undecided_model;
  if (w.undefined_determinism) out << " undefined_determinism=" << w.undefined_determinism;
  out << '\n';
}

nlohmann::json params_json(const RunInfo& info) {
  const auto& p = info.params;
  nlohmann::json excluded = nlohmann::json::array();
  for (const auto& a : p.excluded_activities) excluded.push_back(a);
  return {{"max_activities", p.max_activities},
          {"top_k", p.top_k},
          {"beam_width", p.beam_width},
          {"budget", p.budget},
          {"cooccurrence_prefilter", p.cooccurrence_prefilter},
          {"prune_zero_utility", info.prune_zero_utility},
          {"prune_model_constraints", p.prune_model_constraints},
          {"excluded_activities", excluded}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(kModule, path.string() + ": cannot open for writing");
  out << content;
  if (!out) throw Error(kModule, path.string() + ": write failed");
}

}  // namespace

std::string format_number(double value) {
  if (value == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_breakdown(std::ostream& out, const EvaluationResult& result) {
  out << "    score = " << format_number(result.score) << "  (fitting events: " << result.fitting_events << ")\n";
  write_terms(out, "constraint", result.constraints, true);
  write_terms(out, "utility", result.utilities, false);
  write_warnings(out, result.warnings);
}

void write_text_report(std::ostream& out, const Ranking& ranking, const RunInfo& info) {
  if (info.generated_at) out << "# generated " << *info.generated_at << '\n';
  out << "Local process model ranking\n";
  out << "input: " << info.input << " (" << info.traces << " traces, " << info.events << " events)\n";
  out << "utility spec: " << info.utility_spec.dump() << '\n';
  out << "parameters:";
  const nlohmann::json params = params_json(info);
  for (const auto& [key, value] : params.items()) out << ' ' << key << '=' << value.dump();
  out << '\n';
  out << "search: " << ranking.generations << " generations, " << ranking.generated << " candidates generated, "
      << ranking.evaluated << " evaluated, " << ranking.pruned_model << " pruned by model constraints"
      << (ranking.truncated ? ", TRUNCATED (evaluation budget exhausted)" : "") << '\n';
  if (ranking.entries.empty()) out << "\nno model scored above zero\n";
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& c = ranking.entries[i];
    out << '\n' << '#' << (i + 1) << ' ' << c.tree.to_string() << '\n';
    if (c.determinism) out << "    determinism = " << format_number(*c.determinism) << '\n';
    write_breakdown(out, c.result);
  }
}

nlohmann::json evaluation_to_json(const EvaluationResult& result) {
  return {{"score", result.score},
          {"fitting_events", result.fitting_events},
          {"constraints", terms_json(result.constraints)},
          {"utilities", terms_json(result.utilities)},
          {"warnings", warnings_json(result.warnings)}};
}

nlohmann::json ranking_to_json(const Ranking& ranking, const RunInfo& info) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& c = ranking.entries[i];
    nlohmann::json j = evaluation_to_json(c.result);
    j["rank"] = i + 1;
    j["tree"] = c.tree.to_string();
    j["activities"] = c.tree.activity_count();
    j["determinism"] = c.determinism ? nlohmann::json(*c.determinism) : nlohmann::json(nullptr);
    j["files"] = {{"dot", rank_stem(i) + ".dot"}, {"pnml", rank_stem(i) + ".pnml"}};
    entries.push_back(j);
  }
  return {{"input", info.input},
          {"traces", info.traces},
          {"events", info.events},
          {"utility_spec", info.utility_spec},
          {"parameters", params_json(info)},
          {"search",
           {{"generations", ranking.generations},
            {"generated", ranking.generated},
            {"evaluated", ranking.evaluated},
            {"pruned_model", ranking.pruned_model},
            {"truncated", ranking.truncated}}},
          {"ranking", entries}};
}

void export_ranking(const std::filesystem::path& directory, const Ranking& ranking, const RunInfo& info,
                    const ExportToggles& toggles) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw Error(kModule, directory.string() + ": " + ec.message());
  write_file(directory / "scores.json", ranking_to_json(ranking, info).dump(2) + "\n");
  if (toggles.report) {
    std::ostringstream text;
    write_text_report(text, ranking, info);
    write_file(directory / "report.txt", text.str());
  }
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& c = ranking.entries[i];
    if (toggles.dot) {
      std::ostringstream dot;
      write_dot(dot, c.apn, c.tree.to_string());
      write_file(directory / (rank_stem(i) + ".dot"), dot.str());
    }
    if (toggles.pnml) {
      std::ostringstream pnml;
      write_pnml(pnml, c.apn, c.tree.to_string());
      write_file(directory / (rank_stem(i) + ".pnml"), pnml.str());
    }
  }
}

}  // namespace lpm
