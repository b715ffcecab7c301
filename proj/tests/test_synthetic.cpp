#include <sstream>

#include "doctest.h"
#include "lpm/segmentation.hpp"
#include "lpm/synthetic.hpp"
#include "lpm/xes.hpp"
#include "support.hpp"

using namespace lpm;
using namespace lpm::test;

namespace {

std::string as_xes(const EventLog& log) {
  std::ostringstream out;
  write_xes(out, log);
  return out.str();
}

SyntheticParams params(const std::string& pattern, double noise, std::uint64_t seed) {
  SyntheticParams p;
  p.pattern_tree = parse_process_tree(pattern);
  p.n_traces = 30;
  p.noise_rate = noise;
  p.rng_seed = seed;
  return p;
}

}  // namespace

TEST_SUITE("synthetic") {
  TEST_CASE("same seed gives byte-identical logs") {
    auto p = params("seq(A,and(B,C))", 0.3, 42);
    CHECK(as_xes(generate_synthetic(p)) == as_xes(generate_synthetic(p)));
    auto q = p;
    q.rng_seed = 43;
    CHECK(as_xes(generate_synthetic(p)) != as_xes(generate_synthetic(q)));
  }

  TEST_CASE("without noise every trace is a word of the pattern") {
    for (const char* pattern : {"seq(A,and(B,C))", "xor(A,loop(B,tau))", "loop(A,B)"}) {
      auto p = params(pattern, 0.0, 7);
      EventLog log = generate_synthetic(p);
      AcceptingPetriNet apn = tree_to_apn(p.pattern_tree);
      REQUIRE(log.size() == 30);
      for (const auto& t : log.traces()) {
        std::vector<std::string> word;
        for (const auto& e : t.events) word.push_back(e.activity);
        CHECK(naive_accepts(apn, word, 8));
      }
    }
  }

  TEST_CASE("with noise every trace still contains a fitting run") {
    auto p = params("seq(A,and(B,C))", 0.5, 11);
    EventLog log = generate_synthetic(p);
    AcceptingPetriNet apn = tree_to_apn(p.pattern_tree);
    for (const auto& t : log.traces()) {
      CHECK(segment_trace(t, apn).fitting_events().size() >= 3);
      for (const auto& e : t.events) {
        const bool pattern = e.activity == "A" || e.activity == "B" || e.activity == "C";
        const bool noise = e.activity >= "D" && e.activity <= "H";
        CHECK((pattern || noise));
      }
    }
  }

  TEST_CASE("costs follow the cost model") {
    auto p = params("seq(A,B)", 0.2, 3);
    p.cost_model.fixed = {{"A", 77}};
    EventLog log = generate_synthetic(p);
    for (const auto& t : log.traces())
      for (const auto& e : t.events) {
        const PropertyValue* v = e.property("cost");
        REQUIRE(v != nullptr);
        const double c = numeric_value(*v).value();
        if (e.activity == "A") CHECK(c == 77);
        else CHECK((c >= 10 && c <= 500));
      }
  }

  TEST_CASE("random_word stays in the language") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 40; ++round) {
      ProcessTree t = random_tree(rng, {"A", "B", "C", "D"}, 4);
      AcceptingPetriNet apn = tree_to_apn(t);
      auto w = random_word(t, rng, 0.4);
      CHECK(naive_accepts(apn, w, 10));
    }
  }
}
