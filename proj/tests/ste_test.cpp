#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "caver/errors.hpp"
#include "caver/ste/bench.hpp"
#include "caver/ste/circuit.hpp"
#include "caver/ste/refine.hpp"
#include "support/rng.hpp"

using namespace caver;
using namespace caver::ste;
using caver::testing::Rng;

namespace {

struct Build {
  TernaryCircuit c;

  int input(const std::string& name) {
    c.nodes.push_back({name, GateType::Input, {}});
    return static_cast<int>(c.nodes.size()) - 1;
  }
  int gate(GateType t, const std::string& name, std::vector<int> ins) {
    c.nodes.push_back({name, t, std::move(ins)});
    return static_cast<int>(c.nodes.size()) - 1;
  }
  TernaryCircuit done(std::vector<int> outputs) {
    c.outputs = std::move(outputs);
    return c;
  }
};

// plain two-valued reference evaluator, independent of the ternary code path
std::vector<bool> bool_eval(const TernaryCircuit& c, const std::map<std::string, bool>& in) {
  std::vector<bool> v(c.nodes.size());
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const Gate& g = c.nodes[i];
    auto arg = [&](int k) { return v[static_cast<std::size_t>(g.inputs[static_cast<std::size_t>(k)])]; };
    switch (g.type) {
      case GateType::Input: v[i] = in.at(g.name); break;
      case GateType::And: {
        bool r = true;
        for (std::size_t k = 0; k < g.inputs.size(); ++k) r = r && arg(static_cast<int>(k));
        v[i] = r;
        break;
      }
      case GateType::Or: {
        bool r = false;
        for (std::size_t k = 0; k < g.inputs.size(); ++k) r = r || arg(static_cast<int>(k));
        v[i] = r;
        break;
      }
      case GateType::Not: v[i] = !arg(0); break;
      case GateType::Buf: v[i] = arg(0); break;
      case GateType::Xor: v[i] = arg(0) != arg(1); break;
      case GateType::Mux: v[i] = arg(0) ? arg(2) : arg(1); break;
      case GateType::Latch: REQUIRE(false); break;
    }
  }
  return v;
}

std::vector<std::string> x_input_names(const TernaryCircuit& c, const TernaryAssignment& a) {
  std::vector<std::string> names;
  for (const Gate& g : c.nodes) {
    if (g.type != GateType::Input) continue;
    auto it = a.find(g.name);
    if (it == a.end() || it->second == Ternary::X) names.push_back(g.name);
  }
  return names;
}

// Brute-force scores straight from the knownness semantics: the score of an
// unknown input is 1/(|W|+1) for the smallest W of other unknowns such that
// knowing W leaves the output undetermined but knowing W plus the input pins
// it under every Boolean refinement.
std::vector<std::pair<std::string, Rational>> oracle_scores(const TernaryCircuit& c,
                                                            const TernaryAssignment& a,
                                                            const std::string& output) {
  int out = c.node_index(output);
  REQUIRE(out >= 0);
  std::vector<std::string> xins = x_input_names(c, a);
  std::size_t n = xins.size();
  REQUIRE(n <= 16);

  std::vector<char> det(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) members.push_back(i);
    bool pinned = true;
    for (std::uint32_t b = 0; pinned && b < (std::uint32_t{1} << members.size()); ++b) {
      TernaryAssignment refined = a;
      for (std::size_t j = 0; j < members.size(); ++j)
        refined[xins[members[j]]] = (b >> j & 1) ? Ternary::One : Ternary::Zero;
      pinned = ternary_eval(c, refined)[static_cast<std::size_t>(out)] != Ternary::X;
    }
    det[mask] = pinned;
  }

  std::vector<std::pair<std::string, Rational>> scores;
  for (std::size_t i = 0; i < n; ++i) {
    int best = -1;
    std::uint32_t bit = std::uint32_t{1} << i;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
      if (mask & bit) continue;
      if (det[mask] || !det[mask | bit]) continue;
      int k = std::popcount(mask);
      if (best < 0 || k < best) best = k;
    }
    scores.emplace_back(xins[i], best < 0 ? Rational(0) : Rational(1, best + 1));
  }
  return scores;
}

TernaryCircuit toggle_circuit() {
  Build b;
  int t = b.input("t");  // placeholder slot, retyped below
  b.c.nodes[static_cast<std::size_t>(t)].type = GateType::Latch;
  int n = b.gate(GateType::Not, "n", {t});
  b.c.nodes[static_cast<std::size_t>(t)].inputs = {n};
  return b.done({t});
}

}  // namespace

TEST_CASE("ternary gate tables follow controlling values") {
  auto one_gate = [&](GateType t, std::vector<Ternary> ins) {
    Build b;
    std::vector<int> refs;
    TernaryAssignment a;
    for (std::size_t i = 0; i < ins.size(); ++i) {
      std::string name = "n" + std::to_string(i);
      refs.push_back(b.input(name));
      a[name] = ins[i];
    }
    int g = b.gate(t, "g", refs);
    TernaryCircuit c = b.done({g});
    return ternary_eval(c, a)[static_cast<std::size_t>(g)];
  };
  const Ternary O = Ternary::Zero, I = Ternary::One, X = Ternary::X;

  CHECK(one_gate(GateType::And, {O, X}) == O);
  CHECK(one_gate(GateType::And, {I, X}) == X);
  CHECK(one_gate(GateType::And, {I, I}) == I);
  CHECK(one_gate(GateType::And, {X, X, O}) == O);
  CHECK(one_gate(GateType::Or, {I, X}) == I);
  CHECK(one_gate(GateType::Or, {O, X}) == X);
  CHECK(one_gate(GateType::Or, {O, O}) == O);
  CHECK(one_gate(GateType::Not, {X}) == X);
  CHECK(one_gate(GateType::Not, {O}) == I);
  CHECK(one_gate(GateType::Buf, {X}) == X);
  CHECK(one_gate(GateType::Buf, {I}) == I);
  CHECK(one_gate(GateType::Xor, {I, X}) == X);
  CHECK(one_gate(GateType::Xor, {I, O}) == I);
  CHECK(one_gate(GateType::Xor, {I, I}) == O);
  CHECK(one_gate(GateType::Mux, {X, O, I}) == X);
  CHECK(one_gate(GateType::Mux, {X, I, I}) == I);
  CHECK(one_gate(GateType::Mux, {X, X, X}) == X);
  CHECK(one_gate(GateType::Mux, {O, I, O}) == I);
  CHECK(one_gate(GateType::Mux, {I, I, O}) == O);
}

TEST_CASE("X-free evaluation equals plain Boolean evaluation") {
  for (std::uint64_t seed : {3u, 77u, 901u}) {
    TernaryCircuit c = random_circuit(seed, 10, 20);
    std::vector<std::string> ins;
    for (const Gate& g : c.nodes)
      if (g.type == GateType::Input) ins.push_back(g.name);
    REQUIRE(ins.size() == 10);

    for (std::uint32_t bits = 0; bits < (1u << 10); ++bits) {
      TernaryAssignment a;
      std::map<std::string, bool> ab;
      for (std::size_t i = 0; i < ins.size(); ++i) {
        bool v = bits >> i & 1;
        a[ins[i]] = v ? Ternary::One : Ternary::Zero;
        ab[ins[i]] = v;
      }
      auto tv = ternary_eval(c, a);
      auto bv = bool_eval(c, ab);
      for (std::size_t i = 0; i < tv.size(); ++i) {
        REQUIRE(tv[i] != Ternary::X);
        REQUIRE((tv[i] == Ternary::One) == bv[i]);
      }
    }
  }
}

TEST_CASE("refining an input never flips an already definite node") {
  Rng rng(61409);
  for (int round = 0; round < 60; ++round) {
    TernaryCircuit c = random_circuit(rng.next(), 6, 12);
    TernaryAssignment a;
    for (const Gate& g : c.nodes)
      if (g.type == GateType::Input) {
        int roll = rng.range(0, 2);
        if (roll < 2) a[g.name] = roll ? Ternary::One : Ternary::Zero;
      }
    auto val = ternary_eval(c, a);
    std::vector<std::string> xins = x_input_names(c, a);
    while (!xins.empty()) {
      std::size_t at = static_cast<std::size_t>(rng.below(xins.size()));
      a[xins[at]] = rng.below(2) ? Ternary::One : Ternary::Zero;
      xins.erase(xins.begin() + static_cast<std::ptrdiff_t>(at));
      auto next = ternary_eval(c, a);
      for (std::size_t i = 0; i < val.size(); ++i)
        if (val[i] != Ternary::X) CHECK(next[i] == val[i]);
      val = std::move(next);
    }
  }
}

TEST_CASE("definite nodes agree with every Boolean completion") {
  Rng rng(332211);
  for (int round = 0; round < 40; ++round) {
    TernaryCircuit c = random_circuit(rng.next(), 6, 12);
    TernaryAssignment a;
    for (const Gate& g : c.nodes)
      if (g.type == GateType::Input) {
        int roll = rng.range(0, 2);
        if (roll < 2) a[g.name] = roll ? Ternary::One : Ternary::Zero;
      }
    auto val = ternary_eval(c, a);
    std::vector<std::string> xins = x_input_names(c, a);

    for (std::uint32_t bits = 0; bits < (1u << xins.size()); ++bits) {
      std::map<std::string, bool> ab;
      for (const auto& [name, v] : a)
        if (v != Ternary::X) ab[name] = v == Ternary::One;
      for (std::size_t i = 0; i < xins.size(); ++i) ab[xins[i]] = bits >> i & 1;
      auto bv = bool_eval(c, ab);
      for (std::size_t i = 0; i < val.size(); ++i)
        if (val[i] != Ternary::X) CHECK((val[i] == Ternary::One) == bv[i]);
    }
  }
}

TEST_CASE("a lone unknown on the only path scores 1") {
  Build b;
  int n1 = b.input("n1");
  int n2 = b.input("n2");
  int root = b.gate(GateType::And, "root", {n1, n2});
  TernaryCircuit c = b.done({root});

  auto order = responsibility_order(c, {{"n2", Ternary::One}}, "root");
  REQUIRE(order.inputs.size() == 1);
  CHECK(order.inputs[0].name == "n1");
  CHECK(order.inputs[0].score == Rational(1));
  CHECK(order.exact);
}

TEST_CASE("balanced OR-tree scores all four unknowns equally") {
  Build b;
  int a = b.input("a");
  int b2 = b.input("b");
  int c2 = b.input("c");
  int d = b.input("d");
  int o1 = b.gate(GateType::Or, "o1", {a, b2});
  int o2 = b.gate(GateType::Or, "o2", {c2, d});
  int root = b.gate(GateType::Or, "root", {o1, o2});
  TernaryCircuit c = b.done({root});

  auto order = responsibility_order(c, {}, "root");
  REQUIRE(order.inputs.size() == 4);
  std::vector<std::string> names;
  for (const auto& s : order.inputs) {
    names.push_back(s.name);
    CHECK(s.score == Rational(1, 4));
  }
  CHECK(names == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("an X select with definite data is the whole story") {
  Build b;
  int select = b.input("select");
  int d0 = b.input("d0");
  int d1 = b.input("d1");
  int m = b.gate(GateType::Mux, "m", {select, d0, d1});
  TernaryCircuit c = b.done({m});
  TernaryAssignment a{{"d0", Ternary::Zero}, {"d1", Ternary::One}};

  auto order = responsibility_order(c, a, "m");
  REQUIRE(order.inputs.size() == 1);
  CHECK(order.inputs[0].name == "select");
  CHECK(order.inputs[0].score == Rational(1));

  RefineOptions opts;
  auto resp = refine(c, a, "m", opts);
  REQUIRE(resp.steps.size() == 1);
  CHECK(resp.steps[0].node == "select");
  CHECK(resp.instantiations == 1);
  CHECK(resp.determined.at("m"));

  opts.strategy = Strategy::Topo;
  auto topo = refine(c, a, "m", opts);
  CHECK(resp.instantiations <= topo.instantiations);
}

TEST_CASE("an all-X mux needs every input known") {
  Build b;
  int select = b.input("select");
  int d0 = b.input("d0");
  int d1 = b.input("d1");
  int m = b.gate(GateType::Mux, "m", {select, d0, d1});
  TernaryCircuit c = b.done({m});

  auto order = responsibility_order(c, {}, "m");
  REQUIRE(order.inputs.size() == 3);
  for (const auto& s : order.inputs) CHECK(s.score == Rational(1, 3));
  CHECK(order.inputs[0].name == "d0");
  CHECK(order.inputs[1].name == "d1");
  CHECK(order.inputs[2].name == "select");
}

TEST_CASE("unknowns that no minimal known-set needs are left out") {
  // root = AND(a, OR(a, b)): knowing a alone pins root, so b never helps
  Build b;
  int a = b.input("a");
  int b2 = b.input("b");
  int orab = b.gate(GateType::Or, "orab", {a, b2});
  int root = b.gate(GateType::And, "root", {a, orab});
  TernaryCircuit c = b.done({root});

  auto order = responsibility_order(c, {}, "root");
  REQUIRE(order.inputs.size() == 1);
  CHECK(order.inputs[0].name == "a");
  CHECK(order.inputs[0].score == Rational(1));
}

TEST_CASE("scores match the brute-force knownness oracle") {
  Rng rng(918273);
  int analyzed = 0;
  while (analyzed < 25) {
    TernaryCircuit c = random_circuit(rng.next(), 5, 9);
    std::string target = c.nodes[static_cast<std::size_t>(c.outputs[0])].name;
    auto expected = oracle_scores(c, {}, target);

    auto order = responsibility_order(c, {}, target);
    CHECK(order.exact);
    REQUIRE(!order.inputs.empty());

    std::vector<std::pair<std::string, Rational>> positive;
    for (const auto& [name, score] : expected)
      if (!score.is_zero()) positive.emplace_back(name, score);
    std::sort(positive.begin(), positive.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return y.second < x.second;
      return x.first < y.first;
    });

    REQUIRE(order.inputs.size() == positive.size());
    for (std::size_t i = 0; i < positive.size(); ++i) {
      CHECK(order.inputs[i].name == positive[i].first);
      CHECK(order.inputs[i].score == positive[i].second);
      CHECK(Rational(0) < order.inputs[i].score);
      CHECK(order.inputs[i].score <= Rational(1));
    }
    ++analyzed;
  }
}

TEST_CASE("refine splits the lone unknown once") {
  Build b;
  int n1 = b.input("n1");
  int n2 = b.input("n2");
  int root = b.gate(GateType::And, "root", {n1, n2});
  TernaryCircuit c = b.done({root});

  auto trace = refine(c, {{"n2", Ternary::One}}, "root");
  REQUIRE(trace.steps.size() == 1);
  CHECK(trace.steps[0].node == "n1");
  CHECK(trace.steps[0].branches == std::vector<Ternary>{Ternary::Zero, Ternary::One});
  CHECK(trace.instantiations == 1);
  CHECK(trace.determined.at("root"));
}

TEST_CASE("outputs off the refined cone stay undetermined") {
  Build b;
  int n1 = b.input("n1");
  int n2 = b.input("n2");
  int n3 = b.input("n3");
  int root = b.gate(GateType::And, "root", {n1, n2});
  int side = b.gate(GateType::Buf, "side", {n3});
  TernaryCircuit c = b.done({root, side});

  auto trace = refine(c, {{"n2", Ternary::One}}, "root");
  CHECK(trace.determined.at("root"));
  CHECK(!trace.determined.at("side"));
  CHECK(trace.instantiations == 1);
}

TEST_CASE("every split names an initially unknown input, every strategy") {
  Rng rng(771144);
  for (Strategy strategy : {Strategy::Responsibility, Strategy::Random, Strategy::Topo}) {
    for (int round = 0; round < 8; ++round) {
      TernaryCircuit c = random_circuit(rng.next(), 5, 10);
      std::string target = c.nodes[static_cast<std::size_t>(c.outputs[0])].name;
      TernaryAssignment a;
      RefineOptions opts;
      opts.strategy = strategy;
      opts.seed = rng.next();
      auto trace = refine(c, a, target, opts);

      CHECK(trace.instantiations == static_cast<int>(trace.steps.size()));
      CHECK(trace.determined.at(target));
      std::vector<std::string> xins = x_input_names(c, a);
      for (const auto& step : trace.steps) {
        CHECK(std::find(xins.begin(), xins.end(), step.node) != xins.end());
        CHECK(step.branches == std::vector<Ternary>{Ternary::Zero, Ternary::One});
      }
    }
  }
}

TEST_CASE("the random strategy replays exactly under one seed") {
  TernaryCircuit c = random_circuit(404, 6, 12);
  std::string target = c.nodes[static_cast<std::size_t>(c.outputs[0])].name;
  RefineOptions opts;
  opts.strategy = Strategy::Random;
  opts.seed = 2024;
  auto first = refine(c, {}, target, opts);
  auto second = refine(c, {}, target, opts);
  REQUIRE(first.steps.size() == second.steps.size());
  for (std::size_t i = 0; i < first.steps.size(); ++i)
    CHECK(first.steps[i].node == second.steps[i].node);
  CHECK(first.instantiations == second.instantiations);
}

TEST_CASE("past the cap the order falls back to the flat cut score") {
  Build b;
  std::vector<int> ins;
  for (char ch = 'a'; ch <= 'm'; ++ch) ins.push_back(b.input(std::string(1, ch)));
  int root = b.gate(GateType::Or, "root", ins);
  TernaryCircuit c = b.done({root});

  auto order = responsibility_order(c, {}, "root");
  CHECK(!order.exact);
  REQUIRE(order.inputs.size() == 13);
  for (std::size_t i = 0; i < order.inputs.size(); ++i) {
    CHECK(order.inputs[i].score == Rational(1, 13));
    CHECK(order.inputs[i].name == std::string(1, static_cast<char>('a' + i)));
  }

  OrderOptions strict;
  strict.allow_fallback = false;
  CHECK_THROWS_WITH_AS(responsibility_order(c, {}, "root", strict),
                       doctest::Contains("guardrail"), Error);

  OrderOptions wide;
  wide.cap = 13;
  auto exact = responsibility_order(c, {}, "root", wide);
  CHECK(exact.exact);
  REQUIRE(exact.inputs.size() == 13);
  CHECK(exact.inputs[0].score == Rational(1, 13));
}

TEST_CASE("determined targets and unknown names are rejected") {
  Build b;
  int n1 = b.input("n1");
  int n2 = b.input("n2");
  int root = b.gate(GateType::And, "root", {n1, n2});
  TernaryCircuit c = b.done({root});

  TernaryAssignment pinned{{"n1", Ternary::Zero}};
  CHECK_THROWS_WITH_AS(responsibility_order(c, pinned, "root"),
                       doctest::Contains("already 0"), Error);
  CHECK_THROWS_WITH_AS(refine(c, pinned, "root"), doctest::Contains("already 0"), Error);
  CHECK_THROWS_WITH_AS(responsibility_order(c, {}, "nope"),
                       doctest::Contains("no node named"), Error);
  CHECK_THROWS_WITH_AS(ternary_eval(c, {{"root", Ternary::One}}),
                       doctest::Contains("not an INPUT"), Error);
}

TEST_CASE("latches must be unrolled before evaluation") {
  TernaryCircuit c = toggle_circuit();
  CHECK(c.has_latches());
  CHECK_THROWS_WITH_AS(ternary_eval(c, {}), doctest::Contains("unroll"), Error);
  CHECK_THROWS_WITH_AS(unroll(c, 0), doctest::Contains("at least 1"), Error);
}

TEST_CASE("unrolling a toggle latch alternates cycle by cycle") {
  TernaryCircuit c = unroll(toggle_circuit(), 3);
  CHECK(!c.has_latches());
  c.validate();

  // cycle-0 latch copy is a fresh input; later copies buffer the previous not
  auto val = ternary_eval(c, {{"t#0", Ternary::Zero}});
  auto at = [&](const std::string& name) {
    int idx = c.node_index(name);
    REQUIRE(idx >= 0);
    return val[static_cast<std::size_t>(idx)];
  };
  CHECK(at("t#0") == Ternary::Zero);
  CHECK(at("n#0") == Ternary::One);
  CHECK(at("t#1") == Ternary::One);
  CHECK(at("n#1") == Ternary::Zero);
  CHECK(at("t#2") == Ternary::Zero);

  REQUIRE(c.outputs.size() == 1);
  CHECK(c.nodes[static_cast<std::size_t>(c.outputs[0])].name == "t#2");

  auto open = ternary_eval(c, {});
  CHECK(open[static_cast<std::size_t>(c.outputs[0])] == Ternary::X);
}

TEST_CASE("the unrolled toggle still supports the causal order") {
  TernaryCircuit c = unroll(toggle_circuit(), 4);
  auto order = responsibility_order(c, {}, "t#3");
  REQUIRE(order.inputs.size() == 1);
  CHECK(order.inputs[0].name == "t#0");
  CHECK(order.inputs[0].score == Rational(1));
}

TEST_CASE("netlist files round-trip") {
  NetlistFile f;
  Build b;
  int d = b.input("d");
  int s = b.gate(GateType::Latch, "s", {d});
  int q = b.gate(GateType::Xor, "q", {s, d});
  f.circuit = b.done({q});
  f.circuit.nodes[static_cast<std::size_t>(s)].inputs = {q};  // forward latch data
  f.assignment = {{"d", Ternary::One}};

  json j = netlist_to_json(f);
  NetlistFile back = netlist_from_json(j);
  CHECK(netlist_to_json(back) == j);
  CHECK(back.circuit.nodes.size() == 3);
  CHECK(back.circuit.nodes[1].inputs == std::vector<int>{2});
  CHECK(back.assignment.at("d") == Ternary::One);
}

TEST_CASE("malformed netlists are named precisely") {
  CHECK_THROWS_WITH_AS(netlist_from_json(json::array()), doctest::Contains("JSON object"), Error);
  CHECK_THROWS_WITH_AS(netlist_from_json(json{{"nodes", json::array()}}),
                       doctest::Contains("lacks \"outputs\""), Error);

  json j;
  j["nodes"] = json::array({json{{"name", "a"}, {"type", "INPUT"}}});
  j["outputs"] = json::array({"a"});

  json bad_type = j;
  bad_type["nodes"][0]["type"] = "NAND";
  CHECK_THROWS_WITH_AS(netlist_from_json(bad_type), doctest::Contains("gate type"), Error);

  json bad_ref = j;
  bad_ref["nodes"].push_back(json{{"name", "g"}, {"type", "NOT"}, {"inputs", json::array({"zz"})}});
  CHECK_THROWS_WITH_AS(netlist_from_json(bad_ref), doctest::Contains("unknown node"), Error);

  json bad_out = j;
  bad_out["outputs"] = json::array({"zz"});
  CHECK_THROWS_WITH_AS(netlist_from_json(bad_out), doctest::Contains("unknown output"), Error);

  json bad_assign = j;
  bad_assign["assignment"] = json{{"a", "2"}};
  CHECK_THROWS_WITH_AS(netlist_from_json(bad_assign), doctest::Contains("ternary"), Error);

  json not_input = j;
  not_input["nodes"].push_back(json{{"name", "g"}, {"type", "NOT"}, {"inputs", json::array({"a"})}});
  not_input["assignment"] = json{{"g", "1"}};
  CHECK_THROWS_WITH_AS(netlist_from_json(not_input), doctest::Contains("not an INPUT"), Error);
}

TEST_CASE("structural validation rejects broken circuits") {
  Build dup;
  dup.input("a");
  dup.input("a");
  CHECK_THROWS_WITH_AS(dup.done({0}).validate(), doctest::Contains("duplicate node name"), Error);

  Build arity;
  int a = arity.input("a");
  arity.gate(GateType::Not, "g", {a, a});
  CHECK_THROWS_WITH_AS(arity.done({1}).validate(), doctest::Contains("takes 1"), Error);

  Build fwd;
  fwd.gate(GateType::Not, "g", {1});
  fwd.input("a");
  CHECK_THROWS_WITH_AS(fwd.done({0}).validate(), doctest::Contains("before it is defined"),
                       Error);

  Build out_range;
  out_range.input("a");
  CHECK_THROWS_WITH_AS(out_range.done({7}).validate(), doctest::Contains("out of range"), Error);
}

TEST_CASE("strategy names parse both ways") {
  CHECK(strategy_from("responsibility") == Strategy::Responsibility);
  CHECK(strategy_from("random") == Strategy::Random);
  CHECK(strategy_from("topo") == Strategy::Topo);
  CHECK(std::string(to_string(Strategy::Topo)) == "topo");
  CHECK_THROWS_WITH_AS(strategy_from("fifo"), doctest::Contains("unknown strategy"), Error);
}

TEST_CASE("benchmark runs replay byte for byte") {
  BenchResult first = run_bench(5, 3, 5, 8);
  BenchResult second = run_bench(5, 3, 5, 8);
  REQUIRE(first.rows.size() == 3);
  for (std::size_t i = 0; i < first.rows.size(); ++i) {
    CHECK(first.rows[i].seed == second.rows[i].seed);
    CHECK(first.rows[i].responsibility == second.rows[i].responsibility);
    CHECK(first.rows[i].random == second.rows[i].random);
    CHECK(first.rows[i].topo == second.rows[i].topo);
    CHECK(first.rows[i].responsibility >= 1);
  }
  CHECK(first.mean_responsibility == second.mean_responsibility);
  CHECK(first.mean_random == second.mean_random);
  CHECK(first.mean_topo == second.mean_topo);
}
