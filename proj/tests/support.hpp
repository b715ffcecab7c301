#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lpm/discovery.hpp"
#include "lpm/event_log.hpp"
#include "lpm/petri.hpp"
#include "lpm/process_tree.hpp"
#include "lpm/utility.hpp"

namespace lpm::test {

std::string data_path(const std::string& name);
std::string read_file(const std::string& path);

/// The single trace of Fig. 2(b): ids 1..12, 26-3-2017, with a `cost` property.
EventLog fig2_log();
/// seq(A, and(loop(B,tau), C)), language-equal to the Fig. 2(a) net.
ProcessTree fig2_tree();
/// Fig. 2(a) as drawn, read from tests/data/fig2a.pnml.
AcceptingPetriNet fig2_net();

/// Builds a log from activity sequences. Event ids are "<trace>.<index>",
/// timestamps one minute apart, and `cost` is taken from `costs` when given.
EventLog make_log(const std::vector<std::vector<std::string>>& traces,
                  const std::vector<std::vector<std::int64_t>>& costs = {});

std::vector<std::string> labels_of(std::span<const Event* const> events);
std::vector<std::string> ids_of(std::span<const Event* const> events);

// ---------------------------------------------------------------------------
// Oracles. They share no code with the library beyond the net data structure.

/// Depth-first enumeration of firing sequences. At most `tau_budget` silent
/// firings in a row.
bool naive_accepts(const AcceptingPetriNet& apn, const std::vector<std::string>& word, int tau_budget = 6);

/// Largest number of events covered by complete runs over all ways of cutting
/// `labels` into fitting and non-fitting pieces.
std::size_t exhaustive_max_fitting(const AcceptingPetriNet& apn, const std::vector<std::string>& labels);

/// Every candidate-grammar tree over subsets of `alphabet` with 2..max leaves,
/// canonical and duplicate-free.
std::vector<ProcessTree> all_trees(const std::vector<std::string>& alphabet, std::size_t max_activities);

/// Exhaustive ranking under the library's tie-break order: evaluate every tree,
/// keep positive scores, sort by score desc, fewer activities, determinism
/// desc, canonical string. Returns canonical strings with scores.
std::vector<std::pair<std::string, double>> exhaustive_ranking(const EventLog& log, const CompositeUtility& comp,
                                                               const std::vector<ProcessTree>& trees,
                                                               std::size_t top_k);

std::vector<std::pair<std::string, double>> as_pairs(const Ranking& ranking);

/// Small random log over `alphabet` with costs in [1, 100].
EventLog random_log(std::mt19937_64& rng, const std::vector<std::string>& alphabet, std::size_t traces,
                    std::size_t max_length);

/// Random candidate tree over distinct activities of `alphabet`.
ProcessTree random_tree(std::mt19937_64& rng, const std::vector<std::string>& alphabet, std::size_t max_leaves);

/// Every word of the tree's language up to `max_length`, sorted.
std::vector<std::vector<std::string>> language_up_to(const AcceptingPetriNet& apn,
                                                     const std::vector<std::string>& alphabet, std::size_t max_length);

}  // namespace lpm::test
