#include "lpm/discovery.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_set>

#include "lpm/error.hpp"
#include "lpm/segmentation.hpp"

namespace lpm {
namespace {

constexpr const char* kModule = "discovery";
using Kind = ProcessTree::Kind;

ProcessTree pair(Kind kind, const ProcessTree& x, const ProcessTree& y) { return ProcessTree::node(kind, {x, y}); }

struct UnitPath {
  std::vector<std::size_t> path;  // child indices from the root
  const ProcessTree* unit;
};

void collect_units(const ProcessTree& t, std::vector<std::size_t>& path, std::vector<UnitPath>& out) {
  if (t.kind() == Kind::tau) return;
  if (t.is_repeat()) {
    out.push_back({path, &t});
    return;
  }
  const auto& cs = t.children();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (t.kind() == Kind::loop && i == 1) continue;  // redo leaves stay as they are
    path.push_back(i);
    collect_units(cs[i], path, out);
    path.pop_back();
  }
}

ProcessTree substitute(const ProcessTree& t, std::span<const std::size_t> path, const ProcessTree& with) {
  if (path.empty()) return with;
  std::vector<ProcessTree> children = t.children();
  children[path[0]] = substitute(children[path[0]], path.subspan(1), with);
  return ProcessTree::node(t.kind(), std::move(children));
}

bool better_in_beam(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  std::size_t na = a.tree.activity_count(), nb = b.tree.activity_count();
  if (na != nb) return na < nb;
  return a.tree.to_string() < b.tree.to_string();
}

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, jobs));
}

template <class F>
void parallel_for(std::size_t n, std::size_t workers, F&& body) {
  workers = worker_count(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::string> usable_alphabet(const EventLog& log, const ActivitySet& excluded) {
  std::vector<std::string> out;
  for (const auto& a : log.alphabet())
    if (!excluded.count(a)) out.push_back(a);
  return out;
}

// Unordered activity pairs that occur together in some trace.
std::set<std::pair<std::string, std::string>> cooccurring_pairs(const EventLog& log) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (std::size_t t = 0; t < log.size(); ++t) {
    std::set<ActivityCode> seen(log.codes(t).begin(), log.codes(t).end());
    for (auto i = seen.begin(); i != seen.end(); ++i)
      for (auto j = std::next(i); j != seen.end(); ++j)
        pairs.emplace(log.alphabet()[*i], log.alphabet()[*j]);
  }
  return pairs;
}

}  // namespace

Candidate::Candidate(const ProcessTree& t) : tree(t.canonical()), apn(tree_to_apn(tree)) {}

std::vector<ProcessTree> initial_candidates(const std::vector<std::string>& alphabet) {
  std::vector<ProcessTree> out;
  std::set<std::string> seen;
  auto add = [&](ProcessTree t) {
    t = t.canonical();
    if (seen.insert(t.to_string()).second) out.push_back(std::move(t));
  };
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    for (std::size_t j = 0; j < alphabet.size(); ++j) {
      if (i == j) continue;
      auto a = ProcessTree::leaf(alphabet[i]), b = ProcessTree::leaf(alphabet[j]);
      add(pair(Kind::sequence, a, b));
      add(pair(Kind::loop, a, b));
      if (i < j) {
        add(pair(Kind::exclusive, a, b));
        add(pair(Kind::concurrent, a, b));
      }
    }
  }
  return out;
}

std::vector<ProcessTree> expand(const ProcessTree& tree, const std::vector<std::string>& alphabet,
                                std::size_t max_activities) {
  std::vector<UnitPath> units;
  std::vector<std::size_t> path;
  collect_units(tree, path, units);
  auto present = tree.activities();
  bool room = tree.activity_count() < max_activities;

  std::vector<ProcessTree> out;
  std::set<std::string> seen{tree.canonical().to_string()};
  auto add = [&](const UnitPath& u, const ProcessTree& with) {
    ProcessTree t = substitute(tree, u.path, with).canonical();
    if (seen.insert(t.to_string()).second) out.push_back(std::move(t));
  };
  for (const auto& u : units) {
    const ProcessTree& x = *u.unit;
    bool plain = x.kind() == Kind::activity;
    if (plain) add(u, ProcessTree::repeat(x.activity()));
    if (!room) continue;
    for (const auto& name : alphabet) {
      if (present.count(name)) continue;
      auto a = ProcessTree::leaf(name);
      add(u, pair(Kind::sequence, x, a));
      add(u, pair(Kind::sequence, a, x));
      add(u, pair(Kind::exclusive, x, a));
      add(u, pair(Kind::concurrent, x, a));
      add(u, pair(Kind::loop, x, a));
      if (plain) add(u, pair(Kind::loop, a, x));
    }
  }
  return out;
}

void evaluate_candidates(const LogContext& context, std::vector<Candidate>& candidates, const CompositeUtility& comp,
                         std::size_t workers) {
  parallel_for(candidates.size(), workers, [&](std::size_t i) {
    Candidate& c = candidates[i];
    c.result = evaluate(context, Model{&c.apn, &c.tree}, comp);
    c.score = c.result.score;
    c.evaluated = true;
  });
}

void rank_candidates(const EventLog& log, std::vector<Candidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(), better_in_beam);
  // Determinism only matters among candidates tied on score and size.
  for (std::size_t i = 0; i < candidates.size();) {
    std::size_t j = i + 1;
    while (j < candidates.size() && candidates[j].score == candidates[i].score &&
           candidates[j].tree.activity_count() == candidates[i].tree.activity_count())
      ++j;
    if (j - i > 1) {
      for (std::size_t k = i; k < j; ++k) {
        Candidate& c = candidates[k];
        if (c.determinism) continue;
        FittingSubLog sub = gamma_log(log, c.apn);
        c.determinism = sub.event_count() ? determinism(c.apn, sub) : 0.0;
      }
      std::stable_sort(candidates.begin() + static_cast<std::ptrdiff_t>(i),
                       candidates.begin() + static_cast<std::ptrdiff_t>(j),
                       [](const Candidate& a, const Candidate& b) {
                         if (*a.determinism != *b.determinism) return *a.determinism > *b.determinism;
                         return a.tree.to_string() < b.tree.to_string();
                       });
    }
    i = j;
  }
}

Ranking discover(const EventLog& log, const CompositeUtility& comp, const DiscoveryParams& params) {
  if (log.empty()) throw ConfigError(kModule, "cannot discover on an empty log");
  if (params.max_activities < 2 || params.max_activities > 5)
    throw ConfigError(kModule, "max_activities must be between 2 and 5, got " + std::to_string(params.max_activities));
  if (params.beam_width == 0) throw ConfigError(kModule, "beam_width must be positive");
  comp.check_properties(log);

  LogContext context(log);
  auto alphabet = usable_alphabet(log, params.excluded_activities);

  std::vector<ProcessTree> frontier_trees = initial_candidates(alphabet);
  if (params.cooccurrence_prefilter) {
    auto pairs = cooccurring_pairs(log);
    std::erase_if(frontier_trees, [&](const ProcessTree& t) {
      auto acts = t.activities();
      return !pairs.count({*acts.begin(), *std::next(acts.begin())});
    });
  }

  Ranking ranking;
  std::unordered_set<std::string> seen;
  std::vector<Candidate> pool;  // everything scored above zero
  for (const auto& t : frontier_trees) seen.insert(t.to_string());

  while (!frontier_trees.empty() && !ranking.truncated) {
    ++ranking.generations;
    std::vector<Candidate> generation;
    generation.reserve(frontier_trees.size());
    for (auto& t : frontier_trees) generation.emplace_back(t);
    ranking.generated += generation.size();

    std::vector<std::size_t> to_evaluate;
    for (std::size_t i = 0; i < generation.size(); ++i) {
      Candidate& c = generation[i];
      if (params.prune_model_constraints && comp.has_model_constraints()) {
        Warnings w;
        if (!satisfies_model_constraints(Model{&c.apn, &c.tree}, comp, w)) {
          c.pruned = true;
          c.result.warnings += w;
          ++ranking.pruned_model;
          continue;
        }
      }
      if (ranking.evaluated + to_evaluate.size() >= params.budget) {
        ranking.truncated = true;
        break;
      }
      to_evaluate.push_back(i);
    }
    std::vector<Candidate> batch;
    batch.reserve(to_evaluate.size());
    for (auto i : to_evaluate) batch.push_back(std::move(generation[i]));
    evaluate_candidates(context, batch, comp, params.workers);
    ranking.evaluated += batch.size();
    for (std::size_t k = 0; k < to_evaluate.size(); ++k) generation[to_evaluate[k]] = std::move(batch[k]);
    if (ranking.truncated) {
      std::erase_if(generation, [](const Candidate& c) { return !c.evaluated && !c.pruned; });
    }

    for (const auto& c : generation)
      if (c.evaluated && c.score > 0) pool.push_back(c);

    std::sort(generation.begin(), generation.end(), better_in_beam);
    if (generation.size() > params.beam_width) generation.erase(generation.begin() + static_cast<std::ptrdiff_t>(params.beam_width), generation.end());

    frontier_trees.clear();
    for (const auto& c : generation) {
      for (auto& t : expand(c.tree, alphabet, params.max_activities)) {
        if (seen.insert(t.to_string()).second) frontier_trees.push_back(std::move(t));
      }
    }
  }

  rank_candidates(log, pool);
  if (pool.size() > params.top_k) pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(params.top_k), pool.end());
  ranking.entries = std::move(pool);
  return ranking;
}

}  // namespace lpm
