#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lpm/csv.hpp"
#include "lpm/discovery.hpp"
#include "lpm/dot.hpp"
#include "lpm/error.hpp"
#include "lpm/pnml.hpp"
#include "lpm/process_tree.hpp"
#include "lpm/report.hpp"
#include "lpm/run_config.hpp"
#include "lpm/segmentation.hpp"
#include "lpm/synthetic.hpp"
#include "lpm/utility_spec.hpp"
#include "lpm/xes.hpp"

namespace fs = std::filesystem;
using namespace lpm;

namespace {

// Input options shared by discover, evaluate and segment. A config file is
// read first; flags override individual keys.
struct InputFlags {
  std::string config;
  std::string input;
  std::string format;
  std::string csv_mapping;
  std::string spec;

  void add_to(CLI::App* cmd, bool with_spec) {
    cmd->add_option("-c,--config", config, "Run config (JSON)");
    cmd->add_option("-i,--input", input, "Event log (.xes or .csv)");
    cmd->add_option("--format", format, "Log format: xes or csv (default: from extension)");
    cmd->add_option("--csv-mapping", csv_mapping, "CSV column mapping (JSON)");
    if (with_spec) cmd->add_option("-u,--utility", spec, "Utility spec (JSON)");
  }

  RunConfig resolve(bool need_spec) const {
    RunConfig c;
    if (!config.empty()) c = load_run_config(config);
    if (!input.empty()) {
      c.input.path = input;
      c.input.format = format_from_path(c.input.path);
    } else if (config.empty()) {
      throw ConfigError("cli", "no input log: pass --input or --config");
    }
    if (!format.empty()) c.input.format = format_from_string(format);
    if (!csv_mapping.empty()) {
      std::ifstream in(csv_mapping);
      if (!in) throw ConfigError("config", csv_mapping + ": cannot open CSV mapping");
      try {
        c.input.csv = parse_csv_mapping(nlohmann::json::parse(in));
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", csv_mapping + ": " + e.what());
      }
    }
    if (c.input.format == LogFormat::csv && c.input.csv.case_column.empty())
      throw ConfigError("config", "CSV input needs a column mapping (--csv-mapping or input.csv in the config)");
    if (!spec.empty()) c.utility_spec = spec;
    if (need_spec && c.utility_spec.empty()) throw ConfigError("cli", "no utility spec: pass --utility or --config");
    return c;
  }
};

struct ModelFlags {
  std::string pnml;
  std::string tree;

  void add_to(CLI::App* cmd) {
    auto* m = cmd->add_option("-m,--model", pnml, "Model as PNML");
    auto* t = cmd->add_option("-t,--tree", tree, "Model as process tree, e.g. seq(A,and(loop(B,tau),C))");
    m->excludes(t);
  }

  struct Loaded {
    std::optional<ProcessTree> tree;
    AcceptingPetriNet apn;
  };

  Loaded load() const {
    if (!tree.empty()) {
      ProcessTree t = parse_process_tree(tree);
      return {t, tree_to_apn(t)};
    }
    if (pnml.empty()) throw ConfigError("cli", "no model: pass --model or --tree");
    std::ifstream in(pnml);
    if (!in) throw Error("petri", pnml + ": cannot open model");
    return {std::nullopt, parse_pnml(in, pnml)};
  }
};

std::string now_utc() {
  auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
  return format_iso8601(now);
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cli", path.string() + ": cannot open for writing");
  out << content;
}

CsvMapping synthetic_csv_mapping(const std::string& cost_property) {
  CsvMapping m;
  m.case_column = "case";
  m.activity_column = "activity";
  m.timestamp_column = "time";
  m.event_id_column = "id";
  m.properties.push_back({cost_property, cost_property, ColumnKind::integer, "", false});
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Utility-driven local process model discovery"};
  app.require_subcommand(1);

  // discover
  auto* discover_cmd = app.add_subcommand("discover", "Rank local process models by utility");
  InputFlags discover_in;
  discover_in.add_to(discover_cmd, true);
  std::string out_dir;
  std::optional<std::size_t> max_activities, top_k, beam_width, budget, workers;
  bool no_prefilter = false, no_zero_pruning = false, no_model_pruning = false;
  bool no_dot = false, no_pnml = false, no_report = false, stamp = false;
  discover_cmd->add_option("-o,--output", out_dir, "Output directory");
  discover_cmd->add_option("--max-activities", max_activities, "Largest model size (2..5)");
  discover_cmd->add_option("--top-k", top_k, "Number of models to report");
  discover_cmd->add_option("--beam-width", beam_width, "Candidates kept per generation");
  discover_cmd->add_option("--budget", budget, "Maximum number of candidate evaluations");
  discover_cmd->add_option("-j,--workers", workers, "Evaluation threads (default: all cores)");
  discover_cmd->add_flag("--no-prefilter", no_prefilter, "Seed with all activity pairs, co-occurring or not");
  discover_cmd->add_flag("--no-zero-utility-pruning", no_zero_pruning, "Keep zero-utility activities");
  discover_cmd->add_flag("--no-model-pruning", no_model_pruning, "Evaluate model-constraint violators too");
  discover_cmd->add_flag("--no-dot", no_dot, "Skip DOT export");
  discover_cmd->add_flag("--no-pnml", no_pnml, "Skip PNML export");
  discover_cmd->add_flag("--no-report", no_report, "Skip the text report");
  discover_cmd->add_flag("--timestamp", stamp, "Add a generation time header to the report");

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score one model against a log");
  InputFlags evaluate_in;
  evaluate_in.add_to(evaluate_cmd, true);
  ModelFlags evaluate_model;
  evaluate_model.add_to(evaluate_cmd);
  bool show_segments = false, as_json = false;
  evaluate_cmd->add_flag("--segments", show_segments, "Print the segmentation of every trace");
  evaluate_cmd->add_flag("--json", as_json, "Machine-readable output");

  // segment
  auto* segment_cmd = app.add_subcommand("segment", "Show how each trace splits into fitting runs");
  InputFlags segment_in;
  segment_in.add_to(segment_cmd, false);
  ModelFlags segment_model;
  segment_model.add_to(segment_cmd);

  // export
  auto* export_cmd = app.add_subcommand("export", "Convert models and logs");
  ModelFlags export_model;
  export_model.add_to(export_cmd);
  std::string export_dot, export_pnml, export_log_in, export_log_format, export_log_out, export_csv_mapping;
  export_cmd->add_option("--dot", export_dot, "Write the model as DOT");
  export_cmd->add_option("--pnml", export_pnml, "Write the model as PNML");
  export_cmd->add_option("--log", export_log_in, "Event log to convert");
  export_cmd->add_option("--log-format", export_log_format, "Format of --log: xes or csv");
  export_cmd->add_option("--csv-mapping", export_csv_mapping, "CSV column mapping for --log");
  export_cmd->add_option("--xes", export_log_out, "Write --log as XES");

  // gen-synthetic
  auto* gen_cmd = app.add_subcommand("gen-synthetic", "Generate a log with a planted pattern");
  SyntheticParams gen;
  std::string pattern = "seq(A,and(B,C))", gen_out, noise_alphabet;
  gen_cmd->add_option("-p,--pattern", pattern, "Process tree to plant")->capture_default_str();
  gen_cmd->add_option("-n,--traces", gen.n_traces, "Number of traces")->capture_default_str();
  gen_cmd->add_option("--noise-rate", gen.noise_rate, "Noise insertion probability")->capture_default_str();
  gen_cmd->add_option("-s,--seed", gen.rng_seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--noise-alphabet", noise_alphabet, "Comma-separated noise activities (default D..H)");
  gen_cmd->add_option("--cost-property", gen.cost_model.property, "Cost property name")->capture_default_str();
  gen_cmd->add_option("--cost-min", gen.cost_model.min, "Smallest cost")->capture_default_str();
  gen_cmd->add_option("--cost-max", gen.cost_model.max, "Largest cost")->capture_default_str();
  gen_cmd->add_option("-o,--output", gen_out, "Output log (.xes or .csv)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (discover_cmd->parsed()) {
      RunConfig c = discover_in.resolve(true);
      if (!out_dir.empty()) c.output_directory = out_dir;
      auto& p = c.discovery;
      if (max_activities) p.max_activities = *max_activities;
      if (top_k) p.top_k = *top_k;
      if (beam_width) p.beam_width = *beam_width;
      if (budget) p.budget = *budget;
      if (workers) p.workers = *workers;
      if (no_prefilter) p.cooccurrence_prefilter = false;
      if (no_zero_pruning) c.prune_zero_utility = false;
      if (no_model_pruning) p.prune_model_constraints = false;
      if (no_dot) c.exports.dot = false;
      if (no_pnml) c.exports.pnml = false;
      if (no_report) c.exports.report = false;

      EventLog log = load_log(c.input);
      UtilitySpec spec = load_utility_spec(c.utility_spec.string());
      CompositeUtility comp = build_composite(spec);
      if (c.prune_zero_utility) p.excluded_activities = zero_utility_activities(spec, log.alphabet());
      Ranking ranking = discover(log, comp, p);

      RunInfo info;
      info.input = c.input.path.string();
      info.traces = log.size();
      info.events = log.event_count();
      info.utility_spec = to_json(spec);
      info.params = p;
      info.prune_zero_utility = c.prune_zero_utility;
      if (stamp) info.generated_at = now_utc();
      export_ranking(c.output_directory, ranking, info, c.exports);

      std::cout << ranking.entries.size() << " models ranked (" << ranking.evaluated << " evaluated"
                << (ranking.truncated ? ", budget exhausted" : "") << "), written to " << c.output_directory.string()
                << '\n';
      if (!ranking.entries.empty()) {
        const auto& top = ranking.entries.front();
        std::cout << "top: " << top.tree.to_string() << "  score " << format_number(top.score) << '\n';
      }
      return 0;
    }

    if (evaluate_cmd->parsed()) {
      RunConfig c = evaluate_in.resolve(true);
      EventLog log = load_log(c.input);
      UtilitySpec spec = load_utility_spec(c.utility_spec.string());
      CompositeUtility comp = build_composite(spec);
      auto model = evaluate_model.load();
      Model m{&model.apn, model.tree ? &*model.tree : nullptr};
      EvaluationResult result = evaluate(log, m, comp);
      if (as_json) {
        std::cout << evaluation_to_json(result).dump(2) << '\n';
      } else {
        std::cout << "model: " << (model.tree ? model.tree->to_string() : evaluate_model.pnml) << '\n';
        write_breakdown(std::cout, result);
      }
      if (show_segments) {
        for (const auto& trace : log.traces())
          std::cout << "trace " << trace.id << '\n' << render_segmentation(segment_trace(trace, model.apn)) << '\n';
      }
      return 0;
    }

    if (segment_cmd->parsed()) {
      RunConfig c = segment_in.resolve(false);
      EventLog log = load_log(c.input);
      auto model = segment_model.load();
      for (const auto& trace : log.traces())
        std::cout << "trace " << trace.id << '\n' << render_segmentation(segment_trace(trace, model.apn)) << '\n';
      return 0;
    }

    if (export_cmd->parsed()) {
      bool did_something = false;
      if (!export_dot.empty() || !export_pnml.empty()) {
        auto model = export_model.load();
        std::string name = model.tree ? model.tree->to_string() : "lpm";
        if (!export_dot.empty()) {
          std::ostringstream out;
          write_dot(out, model.apn, name);
          write_text_file(export_dot, out.str());
        }
        if (!export_pnml.empty()) {
          std::ostringstream out;
          write_pnml(out, model.apn, name);
          write_text_file(export_pnml, out.str());
        }
        did_something = true;
      }
      if (!export_log_in.empty()) {
        if (export_log_out.empty()) throw ConfigError("cli", "--log needs --xes to name the output");
        InputFlags flags;
        flags.input = export_log_in;
        flags.format = export_log_format;
        flags.csv_mapping = export_csv_mapping;
        EventLog log = load_log(flags.resolve(false).input);
        std::ostringstream out;
        write_xes(out, log);
        write_text_file(export_log_out, out.str());
        did_something = true;
      }
      if (!did_something) throw ConfigError("cli", "nothing to export: pass --dot, --pnml or --log with --xes");
      return 0;
    }

    if (gen_cmd->parsed()) {
      gen.pattern_tree = parse_process_tree(pattern);
      if (!noise_alphabet.empty()) {
        std::stringstream list(noise_alphabet);
        for (std::string a; std::getline(list, a, ',');)
          if (!a.empty()) gen.noise_alphabet.push_back(a);
      }
      EventLog log = generate_synthetic(gen);
      std::ostringstream out;
      if (format_from_path(gen_out) == LogFormat::csv) write_csv(out, log, synthetic_csv_mapping(gen.cost_model.property));
      else write_xes(out, log);
      write_text_file(gen_out, out.str());
      std::cout << log.size() << " traces, " << log.event_count() << " events written to " << gen_out << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: [cli] " << e.what() << '\n';
    return 2;
  }
  return 1;
}
