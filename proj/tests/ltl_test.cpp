#include <doctest.h>

#include <filesystem>

#include "caver/corpus.hpp"
#include "caver/ltl/formula.hpp"
#include "caver/ltl/kripke.hpp"
#include "caver/ltl/trace.hpp"
#include "support/ltl_oracle.hpp"
#include "support/rng.hpp"

using namespace caver;
using namespace caver::ltl;
using caver::testing::Rng;

namespace {

using Op = LtlFormula::Op;

Trace make_trace(std::vector<std::string> alphabet, std::vector<std::vector<bool>> cycles,
                 std::optional<int> loop = std::nullopt) {
  Trace t;
  t.alphabet = std::move(alphabet);
  t.cycles = std::move(cycles);
  t.loop_start = loop;
  t.validate();
  return t;
}

LtlFormula random_ltl(Rng& rng, const std::vector<std::string>& atoms, int depth) {
  if (depth == 0 || rng.chance(0.35)) {
    switch (rng.below(6)) {
      case 0: return LtlFormula::lit(true);
      case 1: return LtlFormula::lit(false);
      default: return LtlFormula::atom(atoms[rng.below(atoms.size())]);
    }
  }
  switch (rng.below(8)) {
    case 0: return LtlFormula::negation(random_ltl(rng, atoms, depth - 1));
    case 1:
      return LtlFormula::conj(random_ltl(rng, atoms, depth - 1),
                              random_ltl(rng, atoms, depth - 1));
    case 2:
      return LtlFormula::disj(random_ltl(rng, atoms, depth - 1),
                              random_ltl(rng, atoms, depth - 1));
    case 3:
      return LtlFormula::implies(random_ltl(rng, atoms, depth - 1),
                                 random_ltl(rng, atoms, depth - 1));
    case 4: return LtlFormula::next(random_ltl(rng, atoms, depth - 1));
    case 5: return LtlFormula::eventually(random_ltl(rng, atoms, depth - 1));
    case 6: return LtlFormula::globally(random_ltl(rng, atoms, depth - 1));
    default:
      return LtlFormula::until(random_ltl(rng, atoms, depth - 1),
                               random_ltl(rng, atoms, depth - 1));
  }
}

Trace random_trace(Rng& rng, int n_signals, int max_cycles) {
  Trace t;
  for (int i = 0; i < n_signals; ++i) t.alphabet.push_back(std::string(1, char('p' + i)));
  int n = rng.range(1, max_cycles);
  for (int c = 0; c < n; ++c) {
    std::vector<bool> row;
    for (int i = 0; i < n_signals; ++i) row.push_back(rng.chance(0.5));
    t.cycles.push_back(std::move(row));
  }
  if (rng.chance(0.5)) t.loop_start = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  return t;
}

KripkeStructure random_kripke(Rng& rng, int n_states) {
  KripkeStructure k;
  k.atoms = {"p", "q"};
  for (int s = 0; s < n_states; ++s) k.states.push_back("s" + std::to_string(s));
  k.succ.resize(static_cast<std::size_t>(n_states));
  k.labels.resize(static_cast<std::size_t>(n_states));
  for (int s = 0; s < n_states; ++s) {
    k.labels[static_cast<std::size_t>(s)] = {rng.chance(0.5), rng.chance(0.5)};
    int deg = rng.range(1, 2);
    while (static_cast<int>(k.succ[static_cast<std::size_t>(s)].size()) < deg) {
      int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_states)));
      auto& row = k.succ[static_cast<std::size_t>(s)];
      if (std::find(row.begin(), row.end(), t) == row.end()) row.push_back(t);
    }
  }
  k.initial.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(n_states))));
  if (rng.chance(0.3)) {
    int extra = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_states)));
    if (extra != k.initial[0]) k.initial.push_back(extra);
  }
  k.validate();
  return k;
}

}  // namespace

TEST_CASE("ltl parsing and precedence") {
  auto req_grant = parse_ltl("G(req -> F grant)");
  CHECK(req_grant == LtlFormula::globally(LtlFormula::implies(
                         LtlFormula::atom("req"),
                         LtlFormula::eventually(LtlFormula::atom("grant")))));
  CHECK(parse_ltl("G(p | q)") ==
        LtlFormula::globally(LtlFormula::disj(LtlFormula::atom("p"), LtlFormula::atom("q"))));

  auto a = LtlFormula::atom("a"), b = LtlFormula::atom("b"), c = LtlFormula::atom("c");
  CHECK(parse_ltl("a -> b -> c") == LtlFormula::implies(a, LtlFormula::implies(b, c)));
  CHECK(parse_ltl("a | b & c") == LtlFormula::disj(a, LtlFormula::conj(b, c)));
  CHECK(parse_ltl("a & b | c") == LtlFormula::disj(LtlFormula::conj(a, b), c));
  CHECK(parse_ltl("a U b U c") == LtlFormula::until(a, LtlFormula::until(b, c)));
  CHECK(parse_ltl("a U b & c") == LtlFormula::conj(LtlFormula::until(a, b), c));
  CHECK(parse_ltl("X a U b") == LtlFormula::until(LtlFormula::next(a), b));
  CHECK(parse_ltl("!a U b") == LtlFormula::until(LtlFormula::negation(a), b));
  CHECK(parse_ltl("a && b || c") == parse_ltl("a & b | c"));
  CHECK(parse_ltl("F G a") == LtlFormula::eventually(LtlFormula::globally(a)));
  CHECK(parse_ltl("truely") == LtlFormula::atom("truely"));  // not the keyword

  CHECK_THROWS_WITH_AS(parse_ltl("p U"), doctest::Contains("1:4"), Error);
  CHECK_THROWS_AS(parse_ltl("U p"), Error);
  CHECK_THROWS_AS(parse_ltl("(p"), Error);
  CHECK_THROWS_AS(parse_ltl("p q"), Error);
  CHECK_THROWS_AS(parse_ltl(""), Error);
  CHECK_THROWS_AS(parse_ltl("p -> -> q"), Error);

  CHECK(parse_ltl("p & q", {"p", "q"}) == LtlFormula::conj(LtlFormula::atom("p"),
                                                           LtlFormula::atom("q")));
  CHECK_THROWS_AS(parse_ltl("p & r", {"p", "q"}), Error);
}

TEST_CASE("ltl printing round trips") {
  for (const char* text : {"G(req -> F grant)", "a U (b U c)", "(a U b) U c", "!(p U q)",
                           "X X p", "F G !p", "(a -> b) -> c", "a | (b | c)", "true U !q"}) {
    LtlFormula f = parse_ltl(text);
    CHECK(parse_ltl(f.str()) == f);
  }
  Rng rng(74123);
  for (int trial = 0; trial < 300; ++trial) {
    LtlFormula f = random_ltl(rng, {"p", "q", "r"}, 4);
    LtlFormula g = parse_ltl(f.str());
    CHECK(g == f);
    CHECK(g.str() == f.str());
  }
}

TEST_CASE("finite trace semantics") {
  // req at cycle 0, grant at cycle 2
  Trace granted = make_trace({"req", "grant"}, {{true, false}, {false, false}, {false, true}});
  CHECK(check_trace(granted, parse_ltl("G(req -> F grant)")));
  Trace ungranted = make_trace({"req", "grant"}, {{true, false}, {false, false}, {false, false}});
  CHECK(!check_trace(ungranted, parse_ltl("G(req -> F grant)")));

  Trace one = make_trace({"p"}, {{true}});
  CHECK(!check_trace(one, parse_ltl("X p")));       // X at the last cycle is false
  CHECK(!check_trace(one, parse_ltl("X !p")));
  CHECK(check_trace(one, parse_ltl("!X p")));       // duality breaks at the trace end
  CHECK(check_trace(one, parse_ltl("G p")));
  CHECK(check_trace(one, parse_ltl("F p")));

  Trace pp = make_trace({"p", "q"}, {{true, false}, {true, false}, {true, false}});
  CHECK(check_trace(pp, parse_ltl("G p")));
  CHECK(!check_trace(pp, parse_ltl("p U q")));      // q never fulfilled within the trace
  CHECK(!check_trace(pp, parse_ltl("F q")));
  CHECK(check_trace(pp, parse_ltl("p U p")));

  CHECK_THROWS_AS(check_trace(pp, parse_ltl("G r")), Error);  // alphabet mismatch
}

TEST_CASE("lasso trace semantics") {
  // p once per loop: G F p holds, F G p fails
  Trace t = make_trace({"p"}, {{false}, {true}, {false}}, 1);
  CHECK(check_trace(t, parse_ltl("G F p")));
  CHECK(!check_trace(t, parse_ltl("F G p")));
  CHECK(check_trace(t, parse_ltl("X p")));
  CHECK(check_trace(t, parse_ltl("G(p -> X X p)")));

  Trace hold = make_trace({"p"}, {{false}, {true}}, 1);
  CHECK(check_trace(hold, parse_ltl("F G p")));
  CHECK(check_trace(hold, parse_ltl("X G p")));
  CHECK(!check_trace(hold, parse_ltl("G p")));
}

TEST_CASE("lasso checker agrees with the scanning oracle") {
  Rng rng(220033);
  int lassos = 0;
  for (int trial = 0; trial < 600; ++trial) {
    Trace t = random_trace(rng, 1 + static_cast<int>(rng.below(3)), 6);
    LtlFormula f = random_ltl(rng, t.alphabet, 3);
    bool got = check_trace(t, f);
    bool want = testing::oracle_check_trace(t, f);
    CHECK(got == want);
    if (t.loop_start) {
      ++lassos;
      CHECK(check_trace(t, LtlFormula::negation(f)) == !got);  // duality
    }
  }
  CHECK(lassos > 200);
}

TEST_CASE("structure checking on the bundled examples") {
  KripkeStructure reqgrant = kripke_from_json(corpus::reqgrant_kripke());
  LtlFormula spec = parse_ltl("G(req -> F grant)");
  Verdict v = check_structure(reqgrant, spec);
  CHECK(v.holds);
  CHECK(!v.counterexample.has_value());

  KripkeStructure stripped = reqgrant;
  for (auto& row : stripped.labels) row[static_cast<std::size_t>(reqgrant.atom_index("grant"))] = false;
  Verdict bad = check_structure(stripped, spec);
  CHECK(!bad.holds);
  REQUIRE(bad.counterexample.has_value());
  const Trace& cx = *bad.counterexample;
  CHECK(cx.loop_start.has_value());
  CHECK(!check_trace(cx, spec));
  CHECK(!testing::oracle_check_trace(cx, spec));
  CHECK(testing::word_realizable(stripped, cx));

  KripkeStructure gpq = kripke_from_json(corpus::gpq_kripke());
  CHECK(check_structure(gpq, parse_ltl("G(p | q)")).holds);
  CHECK(check_structure(gpq, parse_ltl("G(p & q)")).holds);
  Verdict fp = check_structure(gpq, parse_ltl("F !p"));
  CHECK(!fp.holds);
  CHECK(testing::word_realizable(gpq, *fp.counterexample));

  CHECK_THROWS_AS(check_structure(gpq, parse_ltl("G r")), Error);  // alphabet mismatch

  SUBCASE("verdicts and counterexamples are deterministic") {
    Verdict again = check_structure(stripped, spec);
    REQUIRE(again.counterexample.has_value());
    CHECK(again.counterexample->to_csv() == cx.to_csv());
  }
}

TEST_CASE("structure checker agrees with the bounded lasso oracle") {
  Rng rng(8675309);
  int fails = 0, holds = 0;
  for (int trial = 0; trial < 80; ++trial) {
    KripkeStructure k = random_kripke(rng, 4);
    LtlFormula f = random_ltl(rng, {"p", "q"}, 3);
    Verdict v = check_structure(k, f);
    if (v.holds) {
      ++holds;
      CHECK(!testing::bounded_violation(k, f, 9));
    } else {
      ++fails;
      REQUIRE(v.counterexample.has_value());
      CHECK(!check_trace(*v.counterexample, f));
      CHECK(!testing::oracle_check_trace(*v.counterexample, f));
      CHECK(testing::word_realizable(k, *v.counterexample));
    }
  }
  CHECK(fails > 15);  // both outcomes exercised
  CHECK(holds > 15);
}

TEST_CASE("tableau size guardrail") {
  LtlFormula big = LtlFormula::atom("a0");
  for (int i = 1; i <= 24; ++i)
    big = LtlFormula::conj(big, LtlFormula::atom("a" + std::to_string(i)));
  CHECK_THROWS_AS(BuchiChecker{big}, Error);
}

TEST_CASE("trace csv round trip") {
  Trace t = make_trace({"req", "grant"}, {{true, false}, {false, true}, {false, true}}, 2);
  CHECK(t.to_csv() == "req,grant\n1,0\n0,1\n0,1\n#loop 2\n");
  Trace back = Trace::from_csv(t.to_csv());
  CHECK(back.alphabet == t.alphabet);
  CHECK(back.cycles == t.cycles);
  CHECK(back.loop_start == t.loop_start);

  Trace finite = make_trace({"p"}, {{false}});
  CHECK(finite.to_csv() == "p\n0\n");
  CHECK(!Trace::from_csv(finite.to_csv()).loop_start.has_value());

  // pragma position and padding are forgiving
  Trace padded = Trace::from_csv("p , q\n#loop 0\n 1 ,0\n");
  CHECK(padded.alphabet == std::vector<std::string>{"p", "q"});
  CHECK(padded.loop_start == 0);
  CHECK(padded.cycles[0] == std::vector<bool>{true, false});

  CHECK_THROWS_AS(Trace::from_csv(""), Error);
  CHECK_THROWS_AS(Trace::from_csv("p\n"), Error);            // no cycles
  CHECK_THROWS_AS(Trace::from_csv("p\n2\n"), Error);         // bad cell
  CHECK_THROWS_AS(Trace::from_csv("p,q\n1\n"), Error);       // arity
  CHECK_THROWS_AS(Trace::from_csv("p\n1\n#loop 5\n"), Error);
  CHECK_THROWS_AS(Trace::from_csv("p\n1\n#loop -1\n"), Error);
  CHECK_THROWS_AS(Trace::from_csv("p\n1\n#loop 0\n#loop 0\n"), Error);
  CHECK_THROWS_AS(Trace::from_csv("p\n1\n#spin 0\n"), Error);
  CHECK_THROWS_AS(Trace::from_csv("p\n1\n#loop 0 extra\n"), Error);
  CHECK_THROWS_AS(Trace::from_csv("p,p\n1,1\n"), Error);     // duplicate signal
}

TEST_CASE("kripke json round trip and validation") {
  KripkeStructure k = kripke_from_json(corpus::reqgrant_kripke());
  CHECK(k.states.size() == 5);
  CHECK(k.initial == std::vector<int>{0});
  json j = kripke_to_json(k);
  KripkeStructure k2 = kripke_from_json(j);
  CHECK(k2.states == k.states);
  CHECK(k2.succ == k.succ);
  CHECK(k2.labels == k.labels);
  CHECK(kripke_to_json(k2) == j);

  json bad = corpus::reqgrant_kripke();
  bad["edges"] = json::array({json::array({"s0", "s1"})});  // s1..s4 lose successors
  CHECK_THROWS_WITH_AS(kripke_from_json(bad), doctest::Contains("left-total"), Error);

  bad = corpus::reqgrant_kripke();
  bad["labels"]["s0"] = json::array({"nope"});
  CHECK_THROWS_AS(kripke_from_json(bad), Error);

  bad = corpus::reqgrant_kripke();
  bad["initial"] = json::array();
  CHECK_THROWS_AS(kripke_from_json(bad), Error);

  bad = corpus::reqgrant_kripke();
  bad["initial"] = json::array({"zz"});
  CHECK_THROWS_AS(kripke_from_json(bad), Error);

  bad = corpus::reqgrant_kripke();
  bad.erase("labels");
  CHECK_THROWS_AS(kripke_from_json(bad), Error);

  bad = corpus::reqgrant_kripke();
  bad["labels"].erase("s4");
  CHECK_THROWS_AS(kripke_from_json(bad), Error);
}
