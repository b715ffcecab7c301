#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "lpm/dot.hpp"
#include "lpm/error.hpp"
#include "lpm/petri.hpp"
#include "lpm/pnml.hpp"
#include "support.hpp"

using namespace lpm;
using namespace lpm::test;

namespace {

std::vector<std::string> labels(const AcceptingPetriNet& apn, const std::vector<TransitionIndex>& ts) {
  std::vector<std::string> out;
  for (auto t : ts) {
    const auto& tr = apn.net().transitions()[t];
    out.push_back(tr.label ? *tr.label : "tau");
  }
  std::sort(out.begin(), out.end());
  return out;
}

TransitionIndex by_label(const AcceptingPetriNet& apn, const std::string& label) {
  const auto& ts = apn.net().transitions();
  for (TransitionIndex t = 0; t < ts.size(); ++t)
    if (ts[t].label == label) return t;
  FAIL("no transition " << label);
  return 0;
}

bool accepts_word(const AcceptingPetriNet& apn, std::vector<std::string> w) { return accepts(apn, w); }

// Random small nets: up to 5 places, up to 6 transitions, one token on place 0,
// final marking one token on the last place.
AcceptingPetriNet random_net(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> places(2, 5), transitions(1, 6), label(0, 3), coin(0, 2);
  PetriNet net;
  int np = places(rng), nt = transitions(rng);
  for (int p = 0; p < np; ++p) net.add_place("p" + std::to_string(p));
  std::uniform_int_distribution<int> place(0, np - 1);
  for (int t = 0; t < nt; ++t) {
    int l = label(rng);
    auto ti = net.add_transition("t" + std::to_string(t), l == 3 ? std::nullopt
                                                                 : std::optional<std::string>(std::string(1, char('a' + l))));
    int in = place(rng), out = place(rng);
    net.add_input_arc(static_cast<PlaceIndex>(in), ti);
    net.add_output_arc(ti, static_cast<PlaceIndex>(out));
    if (coin(rng) == 0) {
      int extra = place(rng);
      if (extra != out) net.add_output_arc(ti, static_cast<PlaceIndex>(extra));
    }
  }
  Marking m0(static_cast<std::size_t>(np)), mf(static_cast<std::size_t>(np));
  m0[0] = 1;
  mf[static_cast<PlaceIndex>(np - 1)] = 1;
  return AcceptingPetriNet(std::move(net), m0, {mf});
}

}  // namespace

TEST_SUITE("petri") {
  TEST_CASE("enabled and fire on Fig. 2(a)") {
    AcceptingPetriNet apn = fig2_net();
    const PetriNet& net = apn.net();
    CHECK(labels(apn, enabled(net, apn.initial())) == std::vector<std::string>{"A"});
    CHECK(enabled(net, Marking(net.places().size())).empty());

    Marking after_a = fire(net, apn.initial(), by_label(apn, "A"));
    CHECK(after_a[*net.find_place("p3")] == 1);
    CHECK(after_a[*net.find_place("p4")] == 1);
    CHECK(after_a.total() == 2);
    CHECK(labels(apn, enabled(net, after_a)) == std::vector<std::string>{"B", "C"});

    CHECK_THROWS_AS(fire(net, apn.initial(), by_label(apn, "B")), Error);

    Marking after_b = fire(net, after_a, by_label(apn, "B"));
    auto redo = *net.find_transition("tRedo");
    Marking back = fire(net, after_b, redo);
    CHECK(back == after_a);
  }

  TEST_CASE("fire changes the token count by |post| - |pre|") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 100; ++round) {
      AcceptingPetriNet apn = random_net(rng);
      Marking m = apn.initial();
      for (int step = 0; step < 8; ++step) {
        auto en = enabled(apn.net(), m);
        if (en.empty()) break;
        auto t = en[rng() % en.size()];
        Marking n = fire(apn.net(), m, t);
        auto delta = static_cast<std::int64_t>(apn.net().postset(t).size()) -
                     static_cast<std::int64_t>(apn.net().preset(t).size());
        CHECK(static_cast<std::int64_t>(n.total()) - static_cast<std::int64_t>(m.total()) == delta);
        m = n;
      }
    }
  }

  TEST_CASE("accepts: the Fig. 2(a) language") {
    AcceptingPetriNet apn = fig2_net();
    CHECK(accepts_word(apn, {"A", "B", "C"}));
    CHECK(accepts_word(apn, {"A", "C", "B"}));
    CHECK(accepts_word(apn, {"A", "B", "B", "C"}));
    CHECK(accepts_word(apn, {"A", "B", "C", "B"}));
    CHECK(accepts_word(apn, {"A", "B", "B", "B", "C"}));
    CHECK_FALSE(accepts_word(apn, {"A", "C", "C"}));
    CHECK_FALSE(accepts_word(apn, {"B", "A", "C"}));
    CHECK_FALSE(accepts_word(apn, {"A", "B"}));
    CHECK_FALSE(accepts_word(apn, {}));
    for (int n = 1; n <= 6; ++n) {
      std::vector<std::string> w{"A"};
      for (int i = 0; i < n; ++i) w.push_back("B");
      w.push_back("C");
      CHECK(accepts(apn, w));
      w.erase(w.begin());
      CHECK_FALSE(accepts(apn, w));
    }
  }

  TEST_CASE("accepts: empty word and budget") {
    PetriNet net;
    auto p = net.add_place("p");
    auto q = net.add_place("q");
    auto t = net.add_transition("t", std::nullopt);
    net.add_input_arc(p, t);
    net.add_output_arc(t, q);
    AcceptingPetriNet silent(net, Marking(std::vector<std::uint32_t>{1, 0}), {Marking(std::vector<std::uint32_t>{0, 1})});
    CHECK(accepts_word(silent, {}));
    AcceptingPetriNet stuck(net, Marking(std::vector<std::uint32_t>{0, 1}), {Marking(std::vector<std::uint32_t>{1, 0})});
    CHECK_FALSE(accepts_word(stuck, {}));

    // A silent generator makes the state space unbounded.
    PetriNet pump;
    auto a = pump.add_place("a");
    auto b = pump.add_place("b");
    auto g = pump.add_transition("g", std::nullopt);
    pump.add_input_arc(a, g);
    pump.add_output_arc(g, a);
    pump.add_output_arc(g, b);
    AcceptingPetriNet unbounded(pump, Marking(std::vector<std::uint32_t>{1, 0}),
                                {Marking(std::vector<std::uint32_t>{0, 0})});
    std::vector<std::string> w{"x"};
    CHECK_THROWS_AS(accepts(unbounded, w, 1000), BudgetExceeded);
  }

  TEST_CASE("accepts agrees with a naive firing-sequence enumerator") {
    std::mt19937_64 rng(17);
    const std::vector<std::string> sigma{"a", "b", "c"};
    int compared = 0;
    for (int round = 0; round < 150; ++round) {
      AcceptingPetriNet apn = random_net(rng);
      for (int k = 0; k < 10; ++k) {
        std::vector<std::string> w;
        for (std::size_t len = rng() % 5; len > 0; --len) w.push_back(sigma[rng() % 3]);
        bool expected = naive_accepts(apn, w, 6);
        bool got = false;
        try {
          got = accepts(apn, w, 20000);
        } catch (const BudgetExceeded&) {
          continue;
        }
        // The oracle bounds silent runs; it can only miss acceptances.
        if (expected) CHECK(got);
        if (!expected && got) CHECK(naive_accepts(apn, w, 12));
        ++compared;
      }
    }
    CHECK(compared > 1000);
  }

  TEST_CASE("reachable_label_moves") {
    AcceptingPetriNet apn = fig2_net();
    const PetriNet& net = apn.net();
    Marking m = fire(net, apn.initial(), by_label(apn, "A"));
    m = fire(net, m, by_label(apn, "B"));
    auto moves = reachable_label_moves(apn, m);
    std::set<std::string> ls;
    for (const auto& mv : moves) ls.insert(mv.label);
    CHECK(ls == std::set<std::string>{"B", "C"});
    // B again after the silent redo, C either before or after it.
    CHECK(moves.size() == 3);

    Marking final_marking = apn.finals()[0];
    CHECK(reachable_label_moves(apn, final_marking).empty());

    PetriNet dead;
    auto p = dead.add_place("p");
    auto q = dead.add_place("q");
    auto t = dead.add_transition("t", std::nullopt);
    dead.add_input_arc(p, t);
    dead.add_output_arc(t, q);
    AcceptingPetriNet d(dead, Marking(std::vector<std::uint32_t>{1, 0}), {Marking(std::vector<std::uint32_t>{0, 1})});
    CHECK(reachable_label_moves(d, d.initial()).empty());

    // Silent cycles terminate.
    PetriNet cyc;
    auto x = cyc.add_place("x");
    auto y = cyc.add_place("y");
    auto t1 = cyc.add_transition("t1", std::nullopt);
    auto t2 = cyc.add_transition("t2", std::nullopt);
    auto t3 = cyc.add_transition("t3", std::string("a"));
    cyc.add_input_arc(x, t1);
    cyc.add_output_arc(t1, y);
    cyc.add_input_arc(y, t2);
    cyc.add_output_arc(t2, x);
    cyc.add_input_arc(y, t3);
    cyc.add_output_arc(t3, y);
    AcceptingPetriNet c(cyc, Marking(std::vector<std::uint32_t>{1, 0}), {Marking(std::vector<std::uint32_t>{0, 1})});
    CHECK(tau_closure(c.net(), c.initial()).size() == 2);
    CHECK(reachable_label_moves(c, c.initial()).size() == 1);
  }

  TEST_CASE("final markings must be non-empty and pairwise incomparable") {
    PetriNet net;
    net.add_place("p");
    net.add_place("q");
    Marking m0(std::vector<std::uint32_t>{1, 0});
    CHECK_THROWS_AS(AcceptingPetriNet(net, m0, {}), Error);
    CHECK_THROWS_AS(AcceptingPetriNet(net, m0,
                                      {Marking(std::vector<std::uint32_t>{0, 1}),
                                       Marking(std::vector<std::uint32_t>{1, 1})}),
                    Error);
    CHECK_NOTHROW(AcceptingPetriNet(net, m0,
                                    {Marking(std::vector<std::uint32_t>{0, 1}),
                                     Marking(std::vector<std::uint32_t>{1, 0})}));
    CHECK_THROWS_AS(AcceptingPetriNet(net, Marking(std::vector<std::uint32_t>{1}), {m0}), Error);
  }

  TEST_CASE("net construction rejects bad arcs") {
    PetriNet net;
    net.add_place("p");
    net.add_transition("t", std::string("a"));
    CHECK_THROWS_AS(net.add_place("t"), Error);
    CHECK_THROWS_AS(net.add_arc("p", "missing"), Error);
    net.add_arc("p", "t");
    CHECK_THROWS_AS(net.add_arc("p", "t"), Error);
    net.add_place("q");
    CHECK_THROWS_AS(net.add_arc("p", "q"), Error);
  }

  TEST_CASE("pnml round-trip and errors") {
    AcceptingPetriNet apn = fig2_net();
    std::ostringstream out;
    write_pnml(out, apn, "fig2");
    std::istringstream in(out.str());
    AcceptingPetriNet again = parse_pnml(in, "roundtrip");
    CHECK(again.net().places().size() == apn.net().places().size());
    CHECK(again.net().transitions().size() == apn.net().transitions().size());
    for (auto w : std::vector<std::vector<std::string>>{{"A", "B", "C"}, {"A", "C", "C"}, {"A", "B", "C", "B"}})
      CHECK(accepts(again, w) == accepts(apn, w));

    std::istringstream no_final(R"(<pnml><net id="n"><page id="p">
      <place id="a"><initialMarking><text>1</text></initialMarking></place></page></net></pnml>)");
    CHECK_THROWS_AS(parse_pnml(no_final, "nofinal.pnml"), ParseError);
    std::istringstream weighted(R"(<pnml><net id="n"><page id="p">
      <place id="a"><initialMarking><text>1</text></initialMarking></place>
      <transition id="t"><name><text>x</text></name></transition>
      <arc id="r" source="a" target="t"><inscription><text>2</text></inscription></arc></page>
      <finalmarkings><marking><place idref="a"><text>1</text></place></marking></finalmarkings></net></pnml>)");
    CHECK_THROWS_AS(parse_pnml(weighted, "weighted.pnml"), ParseError);
  }

  TEST_CASE("dot export") {
    AcceptingPetriNet apn = fig2_net();
    std::ostringstream out;
    write_dot(out, apn, "fig2");
    std::string dot = out.str();
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(dot.find("\"t:tA\"") != std::string::npos);
    CHECK(dot.find("fillcolor=black") != std::string::npos);  // silent transitions
    CHECK(dot.find("peripheries=2") != std::string::npos);    // final place
    CHECK(dot.find("●") != std::string::npos);                // initial token
  }
}
