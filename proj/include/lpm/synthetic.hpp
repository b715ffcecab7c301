#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lpm/event_log.hpp"
#include "lpm/process_tree.hpp"

namespace lpm {

/// Costs attached to every generated event: a fixed amount per activity when
/// listed, otherwise an integer drawn uniformly from [min, max].
struct CostModel {
  std::string property = "cost";
  std::int64_t min = 10;
  std::int64_t max = 500;
  std::map<std::string, std::int64_t, std::less<>> fixed;
};

struct SyntheticParams {
  ProcessTree pattern_tree = ProcessTree::tau();
  std::size_t n_traces = 50;
  /// Before each planted event, and after the last one, noise events are
  /// inserted while a uniform draw stays below noise_rate.
  double noise_rate = 0.3;
  std::uint64_t rng_seed = 1;
  CostModel cost_model;
  /// Drawn from uniformly for noise events. Empty: D..H minus the pattern's activities.
  std::vector<std::string> noise_alphabet;
  /// Probability of another loop iteration after each body run.
  double loop_continue = 0.5;
};

/// A random accepted word of `tree`.
std::vector<std::string> random_word(const ProcessTree& tree, std::mt19937_64& rng, double loop_continue = 0.5);

/// One planted word per trace, embedded in noise. Same params give the same log.
EventLog generate_synthetic(const SyntheticParams& params);

}  // namespace lpm
