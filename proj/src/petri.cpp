#include "lpm/petri.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "lpm/error.hpp"

namespace lpm {
namespace {

constexpr const char* kModule = "petri";
constexpr ReplayAutomaton::State kUnknown = UINT32_MAX - 1;

struct StateKey {
  Marking marking;
  std::size_t position;
  bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const noexcept { return MarkingHash{}(k.marking) * 31 + k.position; }
};

bool is_enabled(const PetriNet& net, const Marking& m, TransitionIndex t) {
  for (PlaceIndex p : net.preset(t))
    if (m[p] == 0) return false;
  return true;
}

Marking fire_unchecked(const PetriNet& net, const Marking& m, TransitionIndex t) {
  Marking next = m;
  for (PlaceIndex p : net.preset(t)) --next[p];
  for (PlaceIndex p : net.postset(t)) ++next[p];
  return next;
}

}  // namespace

void PetriNet::claim_id(const std::string& id) {
  if (id.empty()) throw ConfigError(kModule, "empty node id");
  if (ids_.count(id)) throw ConfigError(kModule, "duplicate node id '" + id + "'");
}

PlaceIndex PetriNet::add_place(std::string id, std::string name) {
  claim_id(id);
  auto index = static_cast<PlaceIndex>(places_.size());
  ids_.emplace(id, std::pair{true, index});
  places_.push_back(Place{std::move(id), std::move(name)});
  return index;
}

TransitionIndex PetriNet::add_transition(std::string id, std::optional<std::string> label) {
  claim_id(id);
  auto index = static_cast<TransitionIndex>(transitions_.size());
  ids_.emplace(id, std::pair{false, index});
  transitions_.push_back(Transition{std::move(id), std::move(label)});
  preset_.emplace_back();
  postset_.emplace_back();
  return index;
}

void PetriNet::add_input_arc(PlaceIndex from, TransitionIndex to) {
  if (from >= places_.size() || to >= transitions_.size()) throw ConfigError(kModule, "arc endpoint out of range");
  auto& pre = preset_[to];
  if (std::find(pre.begin(), pre.end(), from) != pre.end()) {
    throw ConfigError(kModule, "duplicate arc " + places_[from].id + " -> " + transitions_[to].id);
  }
  pre.push_back(from);
}

void PetriNet::add_output_arc(TransitionIndex from, PlaceIndex to) {
  if (to >= places_.size() || from >= transitions_.size()) throw ConfigError(kModule, "arc endpoint out of range");
  auto& post = postset_[from];
  if (std::find(post.begin(), post.end(), to) != post.end()) {
    throw ConfigError(kModule, "duplicate arc " + transitions_[from].id + " -> " + places_[to].id);
  }
  post.push_back(to);
}

void PetriNet::add_arc(std::string_view source_id, std::string_view target_id) {
  auto s = ids_.find(std::string(source_id));
  auto t = ids_.find(std::string(target_id));
  if (s == ids_.end()) throw ConfigError(kModule, "arc source '" + std::string(source_id) + "' does not exist");
  if (t == ids_.end()) throw ConfigError(kModule, "arc target '" + std::string(target_id) + "' does not exist");
  if (s->second.first == t->second.first) {
    throw ConfigError(kModule, "arc " + std::string(source_id) + " -> " + std::string(target_id) +
                                   " must connect a place and a transition");
  }
  if (s->second.first) {
    add_input_arc(s->second.second, t->second.second);
  } else {
    add_output_arc(s->second.second, t->second.second);
  }
}

std::optional<PlaceIndex> PetriNet::find_place(std::string_view id) const {
  auto it = ids_.find(std::string(id));
  if (it == ids_.end() || !it->second.first) return std::nullopt;
  return it->second.second;
}

std::optional<TransitionIndex> PetriNet::find_transition(std::string_view id) const {
  auto it = ids_.find(std::string(id));
  if (it == ids_.end() || it->second.first) return std::nullopt;
  return it->second.second;
}

std::vector<std::string> PetriNet::label_alphabet() const {
  std::set<std::string> labels;
  for (const auto& t : transitions_)
    if (t.label) labels.insert(*t.label);
  return {labels.begin(), labels.end()};
}

std::uint64_t Marking::total() const {
  std::uint64_t n = 0;
  for (auto c : tokens_) n += c;
  return n;
}

bool Marking::included_in(const Marking& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < tokens_.size(); ++i)
    if (tokens_[i] > other.tokens_[i]) return false;
  return true;
}

std::size_t MarkingHash::operator()(const Marking& m) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto c : m.tokens()) h = (h ^ c) * 1099511628211ull;
  return h;
}

AcceptingPetriNet::AcceptingPetriNet(PetriNet net, Marking initial, std::vector<Marking> finals)
    : net_(std::move(net)), initial_(std::move(initial)), finals_(std::move(finals)) {
  const std::size_t n = net_.places().size();
  if (initial_.size() != n) throw ConfigError(kModule, "initial marking does not match the number of places");
  if (finals_.empty()) throw ConfigError(kModule, "an accepting Petri net needs at least one final marking");
  for (const auto& f : finals_)
    if (f.size() != n) throw ConfigError(kModule, "final marking does not match the number of places");
  for (std::size_t i = 0; i < finals_.size(); ++i) {
    for (std::size_t j = 0; j < finals_.size(); ++j) {
      if (i != j && finals_[i].included_in(finals_[j])) {
        throw ConfigError(kModule, "final markings " + std::to_string(i) + " and " + std::to_string(j) +
                                       " are comparable (one includes the other)");
      }
    }
  }
}

bool AcceptingPetriNet::is_final(const Marking& m) const {
  return std::find(finals_.begin(), finals_.end(), m) != finals_.end();
}

std::vector<TransitionIndex> enabled(const PetriNet& net, const Marking& m) {
  std::vector<TransitionIndex> out;
  for (TransitionIndex t = 0; t < net.transitions().size(); ++t)
    if (is_enabled(net, m, t)) out.push_back(t);
  return out;
}

Marking fire(const PetriNet& net, const Marking& m, TransitionIndex t) {
  if (t >= net.transitions().size()) throw Error(kModule, "no transition with index " + std::to_string(t));
  if (m.size() != net.places().size()) throw Error(kModule, "marking does not match the number of places");
  if (!is_enabled(net, m, t)) throw Error(kModule, "transition '" + net.transitions()[t].id + "' is not enabled");
  return fire_unchecked(net, m, t);
}

std::vector<Marking> tau_closure(const PetriNet& net, const Marking& m, std::size_t budget) {
  std::vector<Marking> out{m};
  std::unordered_set<Marking, MarkingHash> seen{m};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (TransitionIndex t = 0; t < net.transitions().size(); ++t) {
      if (!net.transitions()[t].invisible() || !is_enabled(net, out[i], t)) continue;
      Marking next = fire_unchecked(net, out[i], t);
      if (seen.insert(next).second) {
        if (seen.size() > budget) throw BudgetExceeded(kModule, "silent closure exceeded the state budget");
        out.push_back(std::move(next));
      }
    }
  }
  return out;
}

bool accepts(const AcceptingPetriNet& apn, std::span<const std::string> word, std::size_t budget) {
  const PetriNet& net = apn.net();
  std::unordered_set<StateKey, StateKeyHash> visited;
  std::deque<StateKey> queue;
  queue.push_back({apn.initial(), 0});
  visited.insert(queue.front());
  while (!queue.empty()) {
    StateKey s = std::move(queue.front());
    queue.pop_front();
    if (s.position == word.size() && apn.is_final(s.marking)) return true;
    for (TransitionIndex t = 0; t < net.transitions().size(); ++t) {
      const auto& tr = net.transitions()[t];
      std::size_t next_pos = s.position;
      if (tr.label) {
        if (s.position == word.size() || *tr.label != word[s.position]) continue;
        ++next_pos;
      }
      if (!is_enabled(net, s.marking, t)) continue;
      StateKey next{fire_unchecked(net, s.marking, t), next_pos};
      if (visited.insert(next).second) {
        if (visited.size() > budget) {
          throw BudgetExceeded(kModule, "language membership undecided: more than " + std::to_string(budget) +
                                            " states visited");
        }
        queue.push_back(std::move(next));
      }
    }
  }
  return false;
}

std::vector<LabelMove> reachable_label_moves(const AcceptingPetriNet& apn, const Marking& m, std::size_t budget) {
  const PetriNet& net = apn.net();
  std::vector<LabelMove> moves;
  for (const Marking& source : tau_closure(net, m, budget)) {
    for (TransitionIndex t = 0; t < net.transitions().size(); ++t) {
      const auto& tr = net.transitions()[t];
      if (tr.invisible() || !is_enabled(net, source, t)) continue;
      moves.push_back(LabelMove{*tr.label, fire_unchecked(net, source, t), t});
    }
  }
  std::sort(moves.begin(), moves.end(), [](const LabelMove& a, const LabelMove& b) {
    if (a.label != b.label) return a.label < b.label;
    if (a.marking != b.marking) return a.marking < b.marking;
    return a.transition < b.transition;
  });
  moves.erase(std::unique(moves.begin(), moves.end(),
                          [](const LabelMove& a, const LabelMove& b) {
                            return a.label == b.label && a.marking == b.marking;
                          }),
              moves.end());
  return moves;
}

ReplayAutomaton::ReplayAutomaton(const AcceptingPetriNet& apn, std::size_t budget) : apn_(&apn), budget_(budget) {
  labels_ = apn.net().label_alphabet();
  transitions_by_label_.resize(labels_.size());
  const auto& ts = apn.net().transitions();
  for (TransitionIndex t = 0; t < ts.size(); ++t) {
    if (ts[t].invisible()) continue;
    auto idx = *label_index(*ts[t].label);
    transitions_by_label_[idx].push_back(t);
  }
  intern_state({intern_marking(apn.initial())});
}

std::optional<std::uint32_t> ReplayAutomaton::label_index(std::string_view label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<std::uint32_t>(it - labels_.begin());
}

std::uint32_t ReplayAutomaton::intern_marking(const Marking& m) {
  auto [it, inserted] = marking_ids_.emplace(m, static_cast<std::uint32_t>(markings_.size()));
  if (inserted) {
    if (markings_.size() >= budget_) {
      throw BudgetExceeded(kModule, "replay exceeded the state budget of " + std::to_string(budget_) + " markings");
    }
    markings_.push_back(m);
    closures_.emplace_back();
  }
  return it->second;
}

const std::vector<std::uint32_t>& ReplayAutomaton::closure_of(std::uint32_t marking) {
  if (!closures_[marking]) {
    std::vector<std::uint32_t> ids;
    for (const Marking& m : tau_closure(apn_->net(), markings_[marking], budget_)) ids.push_back(intern_marking(m));
    closures_[marking] = std::move(ids);
  }
  return *closures_[marking];
}

ReplayAutomaton::State ReplayAutomaton::intern_state(std::vector<std::uint32_t> anchors) {
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  auto it = state_ids_.find(anchors);
  if (it != state_ids_.end()) return it->second;
  DfaState s;
  for (auto a : anchors) {
    for (auto c : std::vector<std::uint32_t>(closure_of(a))) {
      if (apn_->is_final(markings_[c])) s.accepting = true;
    }
  }
  s.anchors = anchors;
  s.next.assign(labels_.size(), kUnknown);
  auto id = static_cast<State>(states_.size());
  states_.push_back(std::move(s));
  state_ids_.emplace(std::move(anchors), id);
  return id;
}

ReplayAutomaton::State ReplayAutomaton::step(State s, std::uint32_t label) {
  if (s == kDead) return kDead;
  State cached = states_[s].next[label];
  if (cached != kUnknown) return cached;
  std::vector<std::uint32_t> targets;
  const PetriNet& net = apn_->net();
  std::vector<std::uint32_t> anchors = states_[s].anchors;
  for (auto a : anchors) {
    std::vector<std::uint32_t> closure = closure_of(a);
    for (auto c : closure) {
      for (TransitionIndex t : transitions_by_label_[label]) {
        if (!is_enabled(net, markings_[c], t)) continue;
        targets.push_back(intern_marking(fire_unchecked(net, markings_[c], t)));
      }
    }
  }
  State result = targets.empty() ? kDead : intern_state(std::move(targets));
  states_[s].next[label] = result;
  return result;
}

}  // namespace lpm
