#include "lpm/segmentation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

#include "lpm/error.hpp"

namespace lpm {
namespace {

constexpr const char* kModule = "segmentation";

using Run = std::pair<std::size_t, std::size_t>;

// Maximum number of positions covered by disjoint accepted runs, solved from
// the right: best[i] is the optimum for the suffix starting at i.
std::vector<Run> optimal_runs(std::span<const std::uint32_t> word, ReplayAutomaton& automaton) {
  const std::size_t n = word.size();
  std::vector<std::size_t> best(n + 1, 0);
  std::vector<std::size_t> run_end(n + 1, 0);  // 0 = position i is not fitting
  for (std::size_t i = n; i-- > 0;) {
    best[i] = best[i + 1];
    run_end[i] = 0;
    auto state = automaton.initial();
    for (std::size_t j = i; j < n; ++j) {
      state = automaton.step(state, word[j]);
      if (state == ReplayAutomaton::kDead) break;
      if (!automaton.accepting(state)) continue;
      std::size_t value = (j + 1 - i) + best[j + 1];
      if (value >= best[i]) {
        best[i] = value;
        run_end[i] = j + 1;
      }
    }
  }
  std::vector<Run> runs;
  for (std::size_t i = 0; i < n;) {
    if (run_end[i] != 0) {
      runs.emplace_back(i, run_end[i]);
      i = run_end[i];
    } else {
      ++i;
    }
  }
  return runs;
}

std::vector<Segment> alternate(const std::vector<Run>& runs, std::size_t n) {
  std::vector<Segment> segments;
  std::size_t cursor = 0;
  for (const auto& [b, e] : runs) {
    segments.push_back({SegmentKind::non_fitting, cursor, b});
    segments.push_back({SegmentKind::fitting, b, e});
    cursor = e;
  }
  segments.push_back({SegmentKind::non_fitting, cursor, n});
  return segments;
}

SubTrace fit_trace(const Trace& trace, std::span<const ActivityCode> codes, const std::vector<std::int64_t>& code_to_label,
                   ReplayAutomaton& automaton, std::vector<std::uint32_t>& word, std::vector<const Event*>& projected) {
  word.clear();
  projected.clear();
  for (std::size_t k = 0; k < codes.size(); ++k) {
    auto label = code_to_label[codes[k]];
    if (label < 0) continue;
    word.push_back(static_cast<std::uint32_t>(label));
    projected.push_back(&trace.events[k]);
  }
  SubTrace sub;
  sub.source = &trace;
  for (const auto& [b, e] : optimal_runs(word, automaton)) {
    std::size_t start = sub.events.size();
    sub.events.insert(sub.events.end(), projected.begin() + static_cast<std::ptrdiff_t>(b),
                      projected.begin() + static_cast<std::ptrdiff_t>(e));
    sub.runs.emplace_back(start, sub.events.size());
  }
  return sub;
}

}  // namespace

std::size_t Segmentation::fitting_count() const {
  std::size_t n = 0;
  for (const auto& s : segments)
    if (s.kind == SegmentKind::fitting) n += s.size();
  return n;
}

std::vector<const Event*> Segmentation::fitting_events() const {
  std::vector<const Event*> out;
  for (const auto& s : segments)
    if (s.kind == SegmentKind::fitting)
      out.insert(out.end(), projected.begin() + static_cast<std::ptrdiff_t>(s.begin),
                 projected.begin() + static_cast<std::ptrdiff_t>(s.end));
  return out;
}

std::vector<std::span<const Event* const>> Segmentation::fitting_runs() const {
  std::vector<std::span<const Event* const>> out;
  for (const auto& s : segments)
    if (s.kind == SegmentKind::fitting) out.emplace_back(projected.data() + s.begin, s.size());
  return out;
}

Segmentation segment_trace(const Trace& trace, const AcceptingPetriNet& lpm, std::size_t budget) {
  ReplayAutomaton automaton(lpm, budget);
  Segmentation result;
  std::vector<std::uint32_t> word;
  for (const auto& e : trace.events) {
    if (auto label = automaton.label_index(e.activity)) {
      word.push_back(*label);
      result.projected.push_back(&e);
    }
  }
  result.segments = alternate(optimal_runs(word, automaton), word.size());
  return result;
}

std::vector<const Event*> gamma(const Trace& trace, const AcceptingPetriNet& lpm, std::size_t budget) {
  return segment_trace(trace, lpm, budget).fitting_events();
}

std::size_t FittingSubLog::event_count() const {
  std::size_t n = 0;
  for (const auto& t : traces) n += t.events.size();
  return n;
}

std::vector<const Event*> FittingSubLog::events() const {
  std::vector<const Event*> out;
  out.reserve(event_count());
  for (const auto& t : traces) out.insert(out.end(), t.events.begin(), t.events.end());
  return out;
}

ActivityCounts activities(const FittingSubLog& sublog) {
  ActivityCounts counts;
  for (const auto& t : sublog.traces)
    for (const Event* e : t.events) ++counts[e->activity];
  return counts;
}

std::size_t activities_count(const FittingSubLog& sublog, std::string_view activity) {
  std::size_t n = 0;
  for (const auto& t : sublog.traces)
    for (const Event* e : t.events)
      if (e->activity == activity) ++n;
  return n;
}

std::vector<const Event*> events_of(const FittingSubLog& sublog) { return sublog.events(); }

FittingSubLog gamma_log(const EventLog& log, const AcceptingPetriNet& lpm, std::size_t budget) {
  ReplayAutomaton automaton(lpm, budget);
  std::vector<std::int64_t> code_to_label(log.alphabet().size(), -1);
  for (ActivityCode c = 0; c < log.alphabet().size(); ++c) {
    if (auto label = automaton.label_index(log.alphabet()[c])) code_to_label[c] = *label;
  }
  FittingSubLog sublog;
  sublog.traces.reserve(log.size());
  std::vector<std::uint32_t> word;
  std::vector<const Event*> projected;
  for (std::size_t t = 0; t < log.size(); ++t) {
    sublog.traces.push_back(fit_trace(log.traces()[t], log.codes(t), code_to_label, automaton, word, projected));
  }
  return sublog;
}

namespace {

// Offered label-distinct moves at each step of one accepted run. The run is
// found by breadth-first search over (marking after the last labeled firing,
// position); the first path found is used.
class ChoiceCounter {
 public:
  ChoiceCounter(const AcceptingPetriNet& apn, std::size_t budget) : apn_(apn), budget_(budget) {}

  void count(std::span<const Event* const> run, ReplayChoiceStats& stats) {
    struct Node {
      Marking marking;
      std::size_t position;
      std::int64_t parent;
    };
    std::vector<Node> nodes{{apn_.initial(), 0, -1}};
    std::map<std::pair<Marking, std::size_t>, bool> seen{{{apn_.initial(), 0}, true}};
    std::int64_t goal = -1;
    for (std::size_t i = 0; i < nodes.size() && goal < 0; ++i) {
      if (nodes[i].position == run.size()) {
        if (reaches_final(nodes[i].marking)) goal = static_cast<std::int64_t>(i);
        continue;
      }
      const std::string& label = run[nodes[i].position]->activity;
      for (const auto& move : moves(nodes[i].marking)) {
        if (move.label != label) continue;
        if (!seen.emplace(std::pair{move.marking, nodes[i].position + 1}, true).second) continue;
        if (seen.size() > budget_) throw BudgetExceeded(kModule, "determinism replay exceeded the state budget");
        nodes.push_back({move.marking, nodes[i].position + 1, static_cast<std::int64_t>(i)});
      }
    }
    if (goal < 0) throw Error(kModule, "fitting run could not be replayed on the model");
    for (std::int64_t at = nodes[goal].parent; at >= 0; at = nodes[at].parent) {
      const auto& ms = moves(nodes[at].marking);
      std::size_t distinct = 0;
      for (std::size_t k = 0; k < ms.size(); ++k)
        if (k == 0 || ms[k].label != ms[k - 1].label) ++distinct;
      stats.offered += distinct;
      ++stats.moves;
    }
  }

 private:
  const std::vector<LabelMove>& moves(const Marking& m) {
    auto it = moves_.find(m);
    if (it == moves_.end()) it = moves_.emplace(m, reachable_label_moves(apn_, m, budget_)).first;
    return it->second;
  }

  bool reaches_final(const Marking& m) {
    for (const auto& c : tau_closure(apn_.net(), m, budget_))
      if (apn_.is_final(c)) return true;
    return false;
  }

  const AcceptingPetriNet& apn_;
  std::size_t budget_;
  std::unordered_map<Marking, std::vector<LabelMove>, MarkingHash> moves_;
};

}  // namespace

ReplayChoiceStats replay_choices(const FittingSubLog& sublog, const AcceptingPetriNet& lpm, std::size_t budget) {
  ChoiceCounter counter(lpm, budget);
  ReplayChoiceStats stats;
  for (const auto& t : sublog.traces) {
    for (const auto& [b, e] : t.runs) {
      counter.count(std::span<const Event* const>(t.events.data() + b, e - b), stats);
    }
  }
  return stats;
}

double determinism(const AcceptingPetriNet& lpm, const FittingSubLog& sublog, std::size_t budget) {
  auto stats = replay_choices(sublog, lpm, budget);
  if (stats.moves == 0) throw Error(kModule, "determinism is undefined: no fitting behavior in the log");
  return static_cast<double>(stats.moves) / static_cast<double>(stats.offered);
}

double determinism(const AcceptingPetriNet& lpm, const EventLog& log, std::size_t budget) {
  return determinism(lpm, gamma_log(log, lpm, budget), budget);
}

std::string render_segmentation(const Segmentation& s) {
  std::ostringstream labels, ids;
  std::size_t lambda = 0, gamma_no = 0;
  for (std::size_t k = 0; k < s.segments.size(); ++k) {
    const auto& seg = s.segments[k];
    const bool fit = seg.kind == SegmentKind::fitting;
    std::string name = fit ? "γ" + std::to_string(++gamma_no) : "λ" + std::to_string(++lambda);
    if (k) {
      labels << ' ';
      ids << ' ';
    }
    labels << name << "=⟨";
    ids << name << "=⟨";
    for (std::size_t i = seg.begin; i < seg.end; ++i) {
      if (i > seg.begin) {
        labels << ',';
        ids << ',';
      }
      labels << s.projected[i]->activity;
      ids << s.projected[i]->id;
    }
    labels << "⟩";
    ids << "⟩";
  }
  return labels.str() + "\n" + ids.str();
}

}  // namespace lpm
