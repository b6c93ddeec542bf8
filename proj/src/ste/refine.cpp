#include "caver/ste/refine.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <random>
#include <utility>

#include "caver/causal/actual_cause.hpp"
#include "caver/causal/model.hpp"
#include "caver/errors.hpp"

namespace caver::ste {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Responsibility: return "responsibility";
    case Strategy::Random: return "random";
    case Strategy::Topo: return "topo";
  }
  return "?";
}

Strategy strategy_from(std::string_view text) {
  if (text == "responsibility") return Strategy::Responsibility;
  if (text == "random") return Strategy::Random;
  if (text == "topo") return Strategy::Topo;
  fail(ErrorKind::InvalidInput,
       "unknown strategy '" + std::string(text) + "': expected responsibility, random or topo");
}

namespace {

// INPUT nodes reachable backward from `out` through X-valued nodes only,
// ascending by index. Definite nodes keep their value under any refinement
// (monotonicity), so inputs outside this set cannot influence the output.
std::vector<int> relevant_x_inputs(const TernaryCircuit& c, const std::vector<Ternary>& val,
                                   int out) {
  std::vector<char> seen(c.nodes.size(), 0);
  std::vector<int> stack{out};
  seen[static_cast<std::size_t>(out)] = 1;
  std::vector<int> inputs;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    const Gate& g = c.nodes[static_cast<std::size_t>(i)];
    if (g.type == GateType::Input) {
      inputs.push_back(i);
      continue;
    }
    for (int ref : g.inputs)
      if (val[static_cast<std::size_t>(ref)] == Ternary::X && !seen[static_cast<std::size_t>(ref)]) {
        seen[static_cast<std::size_t>(ref)] = 1;
        stack.push_back(ref);
      }
  }
  std::sort(inputs.begin(), inputs.end());
  return inputs;
}

// Decides whether knowing a set of the tracked inputs pins the output, by
// evaluating every Boolean refinement of the set (the rest stay X). Memoized
// per input-set mask; shared across all per-input causal searches.
struct DeterminedOracle {
  const TernaryCircuit& c;
  std::vector<Ternary> base;     // node values under the initial assignment
  std::vector<int> input_slots;  // tracked X-inputs, mask bit order
  int out_slot;
  std::map<std::uint64_t, bool> memo;

  bool determined(std::uint64_t mask) {
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    std::vector<int> slots;
    for (std::size_t i = 0; i < input_slots.size(); ++i)
      if (mask >> i & 1) slots.push_back(input_slots[i]);
    bool pinned = true;
    std::vector<Ternary> buf;
    for (std::uint64_t b = 0; pinned && b < (std::uint64_t{1} << slots.size()); ++b) {
      buf = base;
      for (std::size_t j = 0; j < slots.size(); ++j)
        buf[static_cast<std::size_t>(slots[j])] = (b >> j & 1) ? Ternary::One : Ternary::Zero;
      eval_preset(c, buf);
      pinned = buf[static_cast<std::size_t>(out_slot)] != Ternary::X;
    }
    memo.emplace(mask, pinned);
    return pinned;
  }
};

int checked_node(const TernaryCircuit& c, const std::string& output) {
  int idx = c.node_index(output);
  if (idx < 0) fail(ErrorKind::UnknownVariable, "no node named '" + output + "'");
  return idx;
}

std::size_t below(std::mt19937_64& rng, std::size_t n) {
  std::uint64_t span = std::numeric_limits<std::uint64_t>::max();
  span -= span % n;
  std::uint64_t r;
  do r = rng(); while (r >= span);
  return static_cast<std::size_t>(r % n);
}

}  // namespace

ResponsibilityOrder responsibility_order(const TernaryCircuit& c, const TernaryAssignment& a,
                                         const std::string& output, const OrderOptions& options) {
  auto val = ternary_eval(c, a);
  int out = checked_node(c, output);
  if (val[static_cast<std::size_t>(out)] != Ternary::X)
    fail(ErrorKind::OutputAlreadyDetermined,
         "node '" + output + "' is already " +
             std::string(1, to_char(val[static_cast<std::size_t>(out)])) +
             " under the assignment");

  std::vector<int> slots = relevant_x_inputs(c, val, out);
  int m = static_cast<int>(slots.size());

  // the mask arithmetic below tops out at 62 inputs; any search that size
  // would never finish anyway
  int cap = std::min(options.cap, 62);
  if (m > cap) {
    if (!options.allow_fallback)
      fail(ErrorKind::CapExceeded,
           std::to_string(m) + " unknown inputs reach '" + output +
               "', exceeding the guardrail of " + std::to_string(cap) +
               "; the structural fallback is disabled");
    // every X-path starts at its own input, so the only input cut between an
    // input and the output is the whole reaching set; score that cut flat
    ResponsibilityOrder order;
    order.exact = false;
    for (int s : slots)
      order.inputs.push_back({c.nodes[static_cast<std::size_t>(s)].name, Rational(1, m)});
    std::sort(order.inputs.begin(), order.inputs.end(),
              [](const ScoredInput& x, const ScoredInput& y) { return x.name < y.name; });
    return order;
  }

  // one boolean variable per unknown input: K_i = 1 reads "input i is known";
  // the output stays undetermined while no known-set pins it
  auto oracle = std::make_shared<DeterminedOracle>(
      DeterminedOracle{c, val, slots, out, {}});

  std::vector<causal::Variable> exo, endo;
  std::vector<std::string> k_names;
  causal::Context context;
  for (int i = 0; i < m; ++i) {
    k_names.push_back("K" + std::to_string(i));
    exo.push_back({"u:" + k_names.back(), causal::VarKind::Exogenous, {"0", "1"}});
    endo.push_back({k_names.back(), causal::VarKind::Endogenous, {"0", "1"}});
    context["u:" + k_names.back()] = "0";
  }
  endo.push_back({"UNDET", causal::VarKind::Endogenous, {"0", "1"}});

  causal::Signature sig(std::move(exo), std::move(endo));
  std::vector<causal::VarId> k_ids;
  for (const auto& name : k_names) k_ids.push_back(sig.id_of(name));

  std::map<std::string, causal::Equation> fns;
  for (const auto& name : k_names)
    fns[name] = causal::Equation::expression(causal::Expr::var("u:" + name));
  fns["UNDET"] = causal::Equation::native_fn(
      k_names, [oracle, k_ids](std::span<const causal::ValueIndex> vals) {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < k_ids.size(); ++i)
          if (vals[static_cast<std::size_t>(k_ids[i])] == 1) mask |= std::uint64_t{1} << i;
        return static_cast<causal::ValueIndex>(oracle->determined(mask) ? 0 : 1);
      });
  causal::CausalModel model(std::move(sig), std::move(fns));

  causal::CheckOptions engine_opts{m + 1, true};
  causal::CausalFormula undet = causal::CausalFormula::event("UNDET", "1");

  ResponsibilityOrder order;
  for (int i = 0; i < m; ++i) {
    causal::CandidateCause cand{{{k_names[static_cast<std::size_t>(i)], "0"}}};
    auto resp = causal::responsibility_bounded(model, context, cand, undet, m, engine_opts);
    if (resp && !resp->is_zero())
      order.inputs.push_back(
          {c.nodes[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)])].name, *resp});
  }
  std::sort(order.inputs.begin(), order.inputs.end(),
            [](const ScoredInput& x, const ScoredInput& y) {
              if (x.score != y.score) return y.score < x.score;
              return x.name < y.name;
            });
  return order;
}

namespace {

struct Walker {
  const TernaryCircuit& c;
  int out;
  const RefineOptions& options;
  std::mt19937_64 rng;
  std::vector<std::pair<int, std::string>> watched;  // (slot, name), target included
  std::vector<char> pinned_everywhere;
  RefinementTrace trace;

  std::string pick(const TernaryAssignment& cur, const std::vector<Ternary>& val) {
    if (options.strategy == Strategy::Responsibility)
      return responsibility_order(c, cur, c.nodes[static_cast<std::size_t>(out)].name,
                                  options.order)
          .inputs.front()
          .name;
    std::vector<int> slots = relevant_x_inputs(c, val, out);
    std::size_t at = options.strategy == Strategy::Topo ? 0 : below(rng, slots.size());
    return c.nodes[static_cast<std::size_t>(slots[at])].name;
  }

  void walk(TernaryAssignment& cur) {
    std::vector<Ternary> val(c.nodes.size(), Ternary::X);
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
      if (c.nodes[i].type != GateType::Input) continue;
      auto it = cur.find(c.nodes[i].name);
      if (it != cur.end()) val[i] = it->second;
    }
    eval_preset(c, val);

    if (val[static_cast<std::size_t>(out)] != Ternary::X) {
      for (std::size_t i = 0; i < watched.size(); ++i)
        if (val[static_cast<std::size_t>(watched[i].first)] == Ternary::X)
          pinned_everywhere[i] = 0;
      return;
    }

    std::string name = pick(cur, val);
    trace.steps.push_back({name, {Ternary::Zero, Ternary::One}});
    for (Ternary branch : {Ternary::Zero, Ternary::One}) {
      cur[name] = branch;
      walk(cur);
    }
    cur[name] = Ternary::X;
  }
};

}  // namespace

RefinementTrace refine(const TernaryCircuit& c, const TernaryAssignment& a,
                       const std::string& output, const RefineOptions& options) {
  auto val = ternary_eval(c, a);
  int out = checked_node(c, output);
  if (val[static_cast<std::size_t>(out)] != Ternary::X)
    fail(ErrorKind::OutputAlreadyDetermined,
         "node '" + output + "' is already " +
             std::string(1, to_char(val[static_cast<std::size_t>(out)])) +
             " under the assignment");

  Walker w{c, out, options, std::mt19937_64(options.seed), {}, {}, {}};
  for (int o : c.outputs)
    w.watched.emplace_back(o, c.nodes[static_cast<std::size_t>(o)].name);
  if (std::find(c.outputs.begin(), c.outputs.end(), out) == c.outputs.end())
    w.watched.emplace_back(out, output);
  w.pinned_everywhere.assign(w.watched.size(), 1);

  TernaryAssignment cur = a;
  w.walk(cur);

  w.trace.instantiations = static_cast<int>(w.trace.steps.size());
  for (std::size_t i = 0; i < w.watched.size(); ++i)
    w.trace.determined[w.watched[i].second] = w.pinned_everywhere[i] != 0;
  return w.trace;
}

}  // namespace caver::ste
