#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lpm/event_log.hpp"
#include "lpm/petri.hpp"
#include "lpm/process_tree.hpp"
#include "lpm/utility.hpp"

namespace lpm {

struct DiscoveryParams {
  std::size_t max_activities = 4;  // at most 5
  std::size_t top_k = 10;
  std::size_t beam_width = 200;
  std::size_t budget = 100000;     // full evaluations
  std::size_t workers = 0;         // 0: hardware concurrency
  bool cooccurrence_prefilter = true;
  /// Check model-level constraints first and skip evaluating violators.
  bool prune_model_constraints = true;
  /// Activities left out of seeds and expansions (see zero_utility_activities).
  ActivitySet excluded_activities;
};

struct Candidate {
  /// Canonicalizes `tree` and translates it.
  explicit Candidate(const ProcessTree& tree);

  ProcessTree tree;  // canonical
  AcceptingPetriNet apn;
  double score = 0;
  bool evaluated = false;
  bool pruned = false;  // violated a model-level constraint, not evaluated
  EvaluationResult result;
  /// Replay determinism on the fitting behavior; filled for ranked entries.
  std::optional<double> determinism;
};

struct Ranking {
  std::vector<Candidate> entries;
  bool truncated = false;   // evaluation budget ran out
  std::size_t evaluated = 0;
  std::size_t generated = 0;
  std::size_t pruned_model = 0;
  std::size_t generations = 0;
};

/// Two-leaf seeds: seq and loop per ordered pair, xor and and per unordered
/// pair, over `alphabet`. Canonical and duplicate-free.
std::vector<ProcessTree> initial_candidates(const std::vector<std::string>& alphabet);

/// Leaf-replacement expansion. A leaf unit x (an activity, or loop(a,tau))
/// becomes seq(x,a), seq(a,x), xor(x,a), and(x,a) or loop(x,a); a plain
/// activity x also becomes loop(a,x) and loop(x,tau). Activities already in
/// the tree are not added again. Adding an activity respects `max_activities`.
std::vector<ProcessTree> expand(const ProcessTree& tree, const std::vector<std::string>& alphabet,
                                std::size_t max_activities);

/// Evaluates each candidate in place. Results do not depend on `workers`.
void evaluate_candidates(const LogContext& context, std::vector<Candidate>& candidates, const CompositeUtility& comp,
                         std::size_t workers = 0);

/// Orders by score (descending), then fewer activities, then higher
/// determinism, then canonical string. Fills `determinism` where needed to
/// break ties.
void rank_candidates(const EventLog& log, std::vector<Candidate>& candidates);

/// Beam search over process trees. Returns up to top_k distinct candidates
/// with positive score.
Ranking discover(const EventLog& log, const CompositeUtility& comp, const DiscoveryParams& params = {});

}  // namespace lpm
