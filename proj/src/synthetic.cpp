#include "lpm/synthetic.hpp"

#include <algorithm>
#include <chrono>

#include "lpm/error.hpp"

namespace lpm {
namespace {

constexpr const char* kModule = "synthetic";
using Kind = ProcessTree::Kind;

void walk(const ProcessTree& t, std::mt19937_64& rng, double loop_continue, std::vector<std::string>& out) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  switch (t.kind()) {
    case Kind::activity:
      out.push_back(t.activity());
      return;
    case Kind::tau:
      return;
    case Kind::sequence:
      for (const auto& c : t.children()) walk(c, rng, loop_continue, out);
      return;
    case Kind::exclusive: {
      std::uniform_int_distribution<std::size_t> pick(0, t.children().size() - 1);
      walk(t.children()[pick(rng)], rng, loop_continue, out);
      return;
    }
    case Kind::concurrent: {
      std::vector<std::vector<std::string>> parts;
      std::size_t total = 0;
      for (const auto& c : t.children()) {
        parts.emplace_back();
        walk(c, rng, loop_continue, parts.back());
        total += parts.back().size();
      }
      // Uniform interleaving: pick the next part weighted by what it has left.
      std::vector<std::size_t> next(parts.size(), 0);
      for (std::size_t left = total; left > 0; --left) {
        std::uniform_int_distribution<std::size_t> pick(0, left - 1);
        std::size_t r = pick(rng), k = 0;
        for (;; ++k) {
          std::size_t remaining = parts[k].size() - next[k];
          if (r < remaining) break;
          r -= remaining;
        }
        out.push_back(parts[k][next[k]++]);
      }
      return;
    }
    case Kind::loop:
      walk(t.children()[0], rng, loop_continue, out);
      while (coin(rng) < loop_continue) {
        walk(t.children()[1], rng, loop_continue, out);
        walk(t.children()[0], rng, loop_continue, out);
      }
      return;
  }
}

}  // namespace

std::vector<std::string> random_word(const ProcessTree& tree, std::mt19937_64& rng, double loop_continue) {
  std::vector<std::string> word;
  walk(tree, rng, loop_continue, word);
  return word;
}

EventLog generate_synthetic(const SyntheticParams& p) {
  if (p.noise_rate < 0 || p.noise_rate >= 1) throw ConfigError(kModule, "noise_rate must be in [0, 1)");
  if (p.loop_continue < 0 || p.loop_continue >= 1) throw ConfigError(kModule, "loop_continue must be in [0, 1)");
  if (p.cost_model.min > p.cost_model.max) throw ConfigError(kModule, "cost_model.min exceeds cost_model.max");
  auto pattern = p.pattern_tree.activities();
  if (pattern.empty()) throw ConfigError(kModule, "pattern_tree has no activities");

  std::vector<std::string> noise = p.noise_alphabet;
  if (noise.empty()) {
    for (const char* a : {"D", "E", "F", "G", "H"})
      if (!pattern.count(a)) noise.emplace_back(a);
  }
  if (noise.empty() && p.noise_rate > 0) throw ConfigError(kModule, "noise alphabet is empty");

  std::mt19937_64 rng(p.rng_seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_noise(0, noise.empty() ? 0 : noise.size() - 1);
  std::uniform_int_distribution<std::int64_t> cost(p.cost_model.min, p.cost_model.max);
  std::uniform_int_distribution<int> gap_minutes(1, 60);
  const Timestamp epoch = std::chrono::sys_days{std::chrono::year{2020} / 1 / 1};

  std::vector<Trace> traces;
  for (std::size_t n = 0; n < p.n_traces; ++n) {
    std::vector<std::string> word;
    // Empty words (all-tau choices) carry no pattern; draw again.
    for (int attempt = 0; word.empty() && attempt < 1000; ++attempt)
      word = random_word(p.pattern_tree, rng, p.loop_continue);
    if (word.empty()) throw ConfigError(kModule, "pattern_tree only produces the empty word");

    std::vector<std::string> sequence;
    auto add_noise = [&] {
      while (!noise.empty() && coin(rng) < p.noise_rate) sequence.push_back(noise[pick_noise(rng)]);
    };
    for (const auto& a : word) {
      add_noise();
      sequence.push_back(a);
    }
    add_noise();

    Trace trace;
    trace.id = "case_" + std::to_string(n + 1);
    Timestamp time = epoch + std::chrono::days(n);
    for (std::size_t i = 0; i < sequence.size(); ++i) {
      time += std::chrono::minutes(gap_minutes(rng));
      Event e;
      e.id = trace.id + "_" + std::to_string(i + 1);
      e.activity = sequence[i];
      e.time = time;
      auto fixed = p.cost_model.fixed.find(e.activity);
      std::int64_t amount = fixed != p.cost_model.fixed.end() ? fixed->second : cost(rng);
      e.props[p.cost_model.property] = amount;
      trace.events.push_back(std::move(e));
    }
    traces.push_back(std::move(trace));
  }
  return EventLog(std::move(traces));
}

}  // namespace lpm
