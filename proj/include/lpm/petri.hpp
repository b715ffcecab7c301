#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lpm {

using PlaceIndex = std::uint32_t;
using TransitionIndex = std::uint32_t;

struct Place {
  std::string id;
  std::string name;
};

/// A transition without a label is a silent (tau) transition.
struct Transition {
  std::string id;
  std::optional<std::string> label;

  bool invisible() const { return !label.has_value(); }
};

/// Labeled place/transition net with unit arc weights. Place and transition
/// ids share one namespace.
class PetriNet {
 public:
  PlaceIndex add_place(std::string id, std::string name = {});
  TransitionIndex add_transition(std::string id, std::optional<std::string> label);
  void add_input_arc(PlaceIndex from, TransitionIndex to);
  void add_output_arc(TransitionIndex from, PlaceIndex to);
  /// Resolves both ends by id; exactly one end must be a place.
  void add_arc(std::string_view source_id, std::string_view target_id);

  const std::vector<Place>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  std::span<const PlaceIndex> preset(TransitionIndex t) const { return preset_[t]; }
  std::span<const PlaceIndex> postset(TransitionIndex t) const { return postset_[t]; }

  std::optional<PlaceIndex> find_place(std::string_view id) const;
  std::optional<TransitionIndex> find_transition(std::string_view id) const;

  /// Sorted distinct labels of visible transitions.
  std::vector<std::string> label_alphabet() const;

 private:
  void claim_id(const std::string& id);

  std::vector<Place> places_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<PlaceIndex>> preset_;
  std::vector<std::vector<PlaceIndex>> postset_;
  std::unordered_map<std::string, std::pair<bool, std::uint32_t>> ids_;  // (is_place, index)
};

/// Token count per place, indexed like PetriNet::places().
class Marking {
 public:
  Marking() = default;
  explicit Marking(std::size_t places) : tokens_(places, 0) {}
  explicit Marking(std::vector<std::uint32_t> tokens) : tokens_(std::move(tokens)) {}

  std::size_t size() const { return tokens_.size(); }
  std::uint32_t operator[](PlaceIndex p) const { return tokens_[p]; }
  std::uint32_t& operator[](PlaceIndex p) { return tokens_[p]; }
  std::uint64_t total() const;
  const std::vector<std::uint32_t>& tokens() const { return tokens_; }

  /// Multiset inclusion: every place holds at most as many tokens as in `other`.
  bool included_in(const Marking& other) const;

  bool operator==(const Marking&) const = default;
  auto operator<=>(const Marking&) const = default;

 private:
  std::vector<std::uint32_t> tokens_;
};

struct MarkingHash {
  std::size_t operator()(const Marking& m) const noexcept;
};

/// (N, M0, MF). Construction rejects an empty or mutually comparable set of
/// final markings and markings whose size does not match the net.
class AcceptingPetriNet {
 public:
  AcceptingPetriNet(PetriNet net, Marking initial, std::vector<Marking> finals);

  const PetriNet& net() const { return net_; }
  const Marking& initial() const { return initial_; }
  const std::vector<Marking>& finals() const { return finals_; }
  bool is_final(const Marking& m) const;

 private:
  PetriNet net_;
  Marking initial_;
  std::vector<Marking> finals_;
};

inline constexpr std::size_t kDefaultStateBudget = 100000;

/// Transitions whose every input place holds a token.
std::vector<TransitionIndex> enabled(const PetriNet& net, const Marking& m);

/// M - pre(t) + post(t). Throws lpm::Error when t is not enabled.
Marking fire(const PetriNet& net, const Marking& m, TransitionIndex t);

/// Markings reachable from `m` through silent transitions only, `m` first.
std::vector<Marking> tau_closure(const PetriNet& net, const Marking& m, std::size_t budget = kDefaultStateBudget);

/// Whether some firing sequence from M0 to a final marking has `word` as its
/// visible labels. Breadth-first over (marking, position) pairs; throws
/// BudgetExceeded once more than `budget` states were visited.
bool accepts(const AcceptingPetriNet& apn, std::span<const std::string> word, std::size_t budget = kDefaultStateBudget);

struct LabelMove {
  std::string label;
  Marking marking;  // marking after the labeled firing
  TransitionIndex transition;
};

/// Every (label, marking) reachable from `m` by silent firings followed by one
/// labeled firing. Deduplicated on (label, marking); ordered by label, then marking.
std::vector<LabelMove> reachable_label_moves(const AcceptingPetriNet& apn, const Marking& m,
                                             std::size_t budget = kDefaultStateBudget);

/// Lazily determinized view of an accepting net's language. A state stands for
/// the set of markings the net can be in after a prefix; silent moves are
/// folded in. Used for repeated replay of many short words against one net.
/// Not thread-safe: transitions are cached on first use.
class ReplayAutomaton {
 public:
  using State = std::uint32_t;
  static constexpr State kDead = UINT32_MAX;

  explicit ReplayAutomaton(const AcceptingPetriNet& apn, std::size_t budget = kDefaultStateBudget);

  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::uint32_t> label_index(std::string_view label) const;

  State initial() const { return 0; }
  State step(State s, std::uint32_t label);
  bool accepting(State s) const { return states_[s].accepting; }

 private:
  std::uint32_t intern_marking(const Marking& m);
  const std::vector<std::uint32_t>& closure_of(std::uint32_t marking);
  State intern_state(std::vector<std::uint32_t> anchors);

  const AcceptingPetriNet* apn_;
  std::size_t budget_;
  std::vector<std::string> labels_;
  std::vector<std::vector<TransitionIndex>> transitions_by_label_;

  std::vector<Marking> markings_;
  std::unordered_map<Marking, std::uint32_t, MarkingHash> marking_ids_;
  std::vector<std::optional<std::vector<std::uint32_t>>> closures_;

  struct DfaState {
    std::vector<std::uint32_t> anchors;  // sorted marking ids
    bool accepting = false;
    std::vector<State> next;             // per label; kDead-1 = not yet computed
  };
  std::vector<DfaState> states_;
  std::map<std::vector<std::uint32_t>, State> state_ids_;
};

}  // namespace lpm
