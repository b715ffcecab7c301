#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "lpm/pnml.hpp"
#include "lpm/segmentation.hpp"

namespace lpm::test {

std::string data_path(const std::string& name) { return std::string(LPM_TEST_DATA) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

EventLog fig2_log() {
  struct Row {
    const char* activity;
    int hour, minute;
    std::int64_t cost;
  };
  const Row rows[] = {{"A", 13, 0, 100},  {"B", 13, 25, 500}, {"X", 13, 27, 60},  {"B", 13, 30, 400},
                      {"C", 13, 35, 100}, {"C", 13, 42, 500}, {"A", 15, 26, 300}, {"B", 15, 27, 50},
                      {"C", 15, 47, 100}, {"B", 16, 10, 250}, {"B", 16, 52, 300}, {"X", 16, 59, 10}};
  using namespace std::chrono;
  Trace t;
  t.id = "fig2";
  int id = 0;
  for (const auto& r : rows) {
    Event e;
    e.id = std::to_string(++id);
    e.activity = r.activity;
    e.time = sys_days{year{2017} / 3 / 26} + hours(r.hour) + minutes(r.minute);
    e.props["cost"] = r.cost;
    t.events.push_back(std::move(e));
  }
  return EventLog({std::move(t)});
}

ProcessTree fig2_tree() { return parse_process_tree("seq(A,and(loop(B,tau),C))"); }

AcceptingPetriNet fig2_net() {
  std::ifstream in(data_path("fig2a.pnml"));
  return parse_pnml(in, "fig2a.pnml");
}

EventLog make_log(const std::vector<std::vector<std::string>>& traces,
                  const std::vector<std::vector<std::int64_t>>& costs) {
  std::vector<Trace> out;
  const Timestamp start = std::chrono::sys_days{std::chrono::year{2024} / 1 / 1};
  for (std::size_t i = 0; i < traces.size(); ++i) {
    Trace t;
    t.id = "t" + std::to_string(i + 1);
    for (std::size_t k = 0; k < traces[i].size(); ++k) {
      Event e;
      e.id = t.id + "." + std::to_string(k + 1);
      e.activity = traces[i][k];
      e.time = start + std::chrono::hours(24 * i) + std::chrono::minutes(k);
      if (i < costs.size() && k < costs[i].size()) e.props["cost"] = costs[i][k];
      t.events.push_back(std::move(e));
    }
    out.push_back(std::move(t));
  }
  return EventLog(std::move(out));
}

std::vector<std::string> labels_of(std::span<const Event* const> events) {
  std::vector<std::string> out;
  for (const auto* e : events) out.push_back(e->activity);
  return out;
}

std::vector<std::string> ids_of(std::span<const Event* const> events) {
  std::vector<std::string> out;
  for (const auto* e : events) out.push_back(e->id);
  return out;
}

namespace {

bool dfs(const AcceptingPetriNet& apn, const std::vector<std::uint32_t>& m, const std::vector<std::string>& word,
         std::size_t pos, int tau_left, int tau_budget) {
  const PetriNet& net = apn.net();
  if (pos == word.size()) {
    for (const auto& f : apn.finals())
      if (f.tokens() == m) return true;
  }
  for (TransitionIndex t = 0; t < net.transitions().size(); ++t) {
    bool ok = true;
    for (auto p : net.preset(t)) ok = ok && m[p] > 0;
    if (!ok) continue;
    const auto& label = net.transitions()[t].label;
    std::size_t next_pos = pos;
    int next_tau = tau_left;
    if (label) {
      if (pos == word.size() || *label != word[pos]) continue;
      ++next_pos;
      next_tau = tau_budget;
    } else {
      if (tau_left == 0) continue;
      --next_tau;
    }
    std::vector<std::uint32_t> n = m;
    for (auto p : net.preset(t)) --n[p];
    for (auto p : net.postset(t)) ++n[p];
    if (dfs(apn, n, word, next_pos, next_tau, tau_budget)) return true;
  }
  return false;
}

}  // namespace

bool naive_accepts(const AcceptingPetriNet& apn, const std::vector<std::string>& word, int tau_budget) {
  return dfs(apn, apn.initial().tokens(), word, 0, tau_budget, tau_budget);
}

std::size_t exhaustive_max_fitting(const AcceptingPetriNet& apn, const std::vector<std::string>& labels) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> best(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) {
    best[i] = best[i + 1];
    for (std::size_t j = i + 1; j <= n; ++j) {
      std::vector<std::string> piece(labels.begin() + static_cast<std::ptrdiff_t>(i),
                                     labels.begin() + static_cast<std::ptrdiff_t>(j));
      if (naive_accepts(apn, piece)) best[i] = std::max(best[i], (j - i) + best[j]);
    }
  }
  return best[0];
}

namespace {

using Kind = ProcessTree::Kind;

std::vector<ProcessTree> build(const std::vector<std::string>& s) {
  if (s.size() == 1) return {ProcessTree::leaf(s[0]), ProcessTree::repeat(s[0])};
  std::map<std::string, ProcessTree> out;
  auto add = [&](ProcessTree t) {
    t = t.canonical();
    out.emplace(t.to_string(), std::move(t));
  };
  const std::size_t n = s.size();
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<std::string> left, right;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? left : right).push_back(s[i]);
    auto lt = build(left), rt = build(right);
    for (const auto& a : lt) {
      for (const auto& b : rt) {
        add(ProcessTree::node(Kind::sequence, {a, b}));
        add(ProcessTree::node(Kind::exclusive, {a, b}));
        add(ProcessTree::node(Kind::concurrent, {a, b}));
      }
      if (right.size() == 1) add(ProcessTree::node(Kind::loop, {a, ProcessTree::leaf(right[0])}));
    }
  }
  std::vector<ProcessTree> v;
  for (auto& [k, t] : out) v.push_back(std::move(t));
  return v;
}

}  // namespace

std::vector<ProcessTree> all_trees(const std::vector<std::string>& alphabet, std::size_t max_activities) {
  std::vector<ProcessTree> out;
  const std::size_t n = alphabet.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::string> subset;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) subset.push_back(alphabet[i]);
    if (subset.size() < 2 || subset.size() > max_activities) continue;
    for (auto& t : build(subset)) out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::pair<std::string, double>> exhaustive_ranking(const EventLog& log, const CompositeUtility& comp,
                                                               const std::vector<ProcessTree>& trees,
                                                               std::size_t top_k) {
  struct Row {
    std::string name;
    double score;
    std::size_t size;
    double det;
  };
  std::vector<Row> rows;
  for (const auto& t : trees) {
    auto apn = tree_to_apn(t);
    double score = evaluate(log, Model{&apn, &t}, comp).score;
    if (score <= 0) continue;
    auto sub = gamma_log(log, apn);
    double det = sub.event_count() ? determinism(apn, sub) : 0.0;
    rows.push_back({t.to_string(), score, t.activity_count(), det});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.size != b.size) return a.size < b.size;
    if (a.det != b.det) return a.det > b.det;
    return a.name < b.name;
  });
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < rows.size() && i < top_k; ++i) out.emplace_back(rows[i].name, rows[i].score);
  return out;
}

std::vector<std::pair<std::string, double>> as_pairs(const Ranking& ranking) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& c : ranking.entries) out.emplace_back(c.tree.to_string(), c.score);
  return out;
}

EventLog random_log(std::mt19937_64& rng, const std::vector<std::string>& alphabet, std::size_t traces,
                    std::size_t max_length) {
  std::uniform_int_distribution<std::size_t> len(1, max_length), pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<std::int64_t> cost(1, 100);
  std::vector<std::vector<std::string>> acts;
  std::vector<std::vector<std::int64_t>> costs;
  for (std::size_t t = 0; t < traces; ++t) {
    acts.emplace_back();
    costs.emplace_back();
    for (std::size_t k = len(rng); k > 0; --k) {
      acts.back().push_back(alphabet[pick(rng)]);
      costs.back().push_back(cost(rng));
    }
  }
  return make_log(acts, costs);
}

namespace {

ProcessTree random_build(std::mt19937_64& rng, std::vector<std::string> s) {
  std::uniform_int_distribution<int> coin(0, 1);
  if (s.size() == 1) return coin(rng) ? ProcessTree::leaf(s[0]) : ProcessTree::repeat(s[0]);
  std::uniform_int_distribution<std::size_t> cut(1, s.size() - 1);
  std::size_t k = cut(rng);
  std::vector<std::string> left(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::string> right(s.begin() + static_cast<std::ptrdiff_t>(k), s.end());
  std::uniform_int_distribution<int> op(0, right.size() == 1 ? 3 : 2);
  switch (op(rng)) {
    case 0: return ProcessTree::node(Kind::sequence, {random_build(rng, left), random_build(rng, right)});
    case 1: return ProcessTree::node(Kind::exclusive, {random_build(rng, left), random_build(rng, right)});
    case 2: return ProcessTree::node(Kind::concurrent, {random_build(rng, left), random_build(rng, right)});
    default: return ProcessTree::node(Kind::loop, {random_build(rng, left), ProcessTree::leaf(right[0])});
  }
}

}  // namespace

ProcessTree random_tree(std::mt19937_64& rng, const std::vector<std::string>& alphabet, std::size_t max_leaves) {
  std::vector<std::string> s = alphabet;
  std::shuffle(s.begin(), s.end(), rng);
  std::uniform_int_distribution<std::size_t> size(2, std::min(max_leaves, s.size()));
  s.resize(size(rng));
  return random_build(rng, s).canonical();
}

std::vector<std::vector<std::string>> language_up_to(const AcceptingPetriNet& apn,
                                                     const std::vector<std::string>& alphabet,
                                                     std::size_t max_length) {
  std::vector<std::vector<std::string>> out, layer{{}};
  for (std::size_t len = 0; len <= max_length; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& w : layer) {
      if (naive_accepts(apn, w)) out.push_back(w);
      if (len < max_length)
        for (const auto& a : alphabet) {
          auto v = w;
          v.push_back(a);
          next.push_back(std::move(v));
        }
    }
    layer = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lpm::test
