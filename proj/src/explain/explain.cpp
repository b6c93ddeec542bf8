#include "caver/explain/explain.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <tuple>

#include "caver/causal/actual_cause.hpp"
#include "caver/errors.hpp"

namespace caver::explain {

using causal::CandidateCause;
using causal::CausalFormula;
using causal::CausalModel;
using causal::Context;
using causal::Equation;
using causal::Signature;
using causal::ValueIndex;
using causal::Variable;
using ltl::LtlFormula;
using ltl::Trace;

bool Explanation::contains(const std::string& signal, int cycle) const {
  for (const auto& p : points)
    if (p.signal == signal && p.cycle == cycle) return true;
  return false;
}

namespace {

void require_fails(const Trace& t, const LtlFormula& f) {
  if (ltl::check_trace(t, f))
    fail(ErrorKind::FormulaHolds,
         "'" + f.str() + "' holds on the trace; there is no failure to explain");
}

// signal indices the formula mentions, in name order
std::vector<int> mentioned_signals(const Trace& t, const LtlFormula& f) {
  std::vector<int> out;
  for (const auto& name : f.atoms()) {
    int idx = t.find_signal(name);
    if (idx < 0)
      fail(ErrorKind::AlphabetMismatch, "atom '" + name + "' is not a trace signal");
    out.push_back(idx);
  }
  return out;
}

}  // namespace

Explanation explain_exact(const Trace& t, const LtlFormula& f, const ExplainOptions& opts) {
  t.validate();
  require_fails(t, f);

  auto signals = mentioned_signals(t, f);
  int n = t.cycle_count();
  int n_cells = static_cast<int>(signals.size()) * n;
  if (n_cells + 1 > opts.cap && !opts.force)
    fail(ErrorKind::CapExceeded,
         std::to_string(signals.size()) + " signals * " + std::to_string(n) + " cycles = " +
             std::to_string(n_cells) + " cell variables exceeds the guardrail of " +
             std::to_string(opts.cap - 1) + "; pass force to run anyway");

  // trace as a causal model: one passthrough boolean per mentioned cell,
  // FAIL computed by checking the edited trace
  std::vector<std::pair<int, int>> cells;  // (signal index, cycle)
  std::vector<std::string> var_names;
  std::vector<Variable> exo, endo;
  Context context;
  for (int s : signals)
    for (int c = 0; c < n; ++c) {
      cells.emplace_back(s, c);
      var_names.push_back(t.alphabet[static_cast<std::size_t>(s)] + "@" + std::to_string(c));
      exo.push_back({"u:" + var_names.back(), causal::VarKind::Exogenous, {"0", "1"}});
      endo.push_back({var_names.back(), causal::VarKind::Endogenous, {"0", "1"}});
      context["u:" + var_names.back()] = t.value(c, s) ? "1" : "0";
    }
  endo.push_back({"FAIL", causal::VarKind::Endogenous, {"0", "1"}});

  Signature sig(std::move(exo), std::move(endo));
  std::vector<causal::VarId> cell_ids;
  for (const auto& name : var_names) cell_ids.push_back(sig.id_of(name));

  std::map<std::string, Equation> fns;
  for (const auto& name : var_names)
    fns[name] = Equation::expression(causal::Expr::var("u:" + name));
  auto base = std::make_shared<Trace>(t);
  auto phi = std::make_shared<LtlFormula>(f);
  auto cells_copy = cells;
  fns["FAIL"] = Equation::native_fn(
      var_names, [base, phi, cells_copy, cell_ids](std::span<const ValueIndex> vals) {
        Trace edited = *base;
        for (std::size_t i = 0; i < cells_copy.size(); ++i) {
          auto [s, c] = cells_copy[i];
          edited.cycles[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)] =
              vals[static_cast<std::size_t>(cell_ids[i])] == 1;
        }
        return static_cast<ValueIndex>(ltl::check_trace(edited, *phi) ? 0 : 1);
      });
  CausalModel model(std::move(sig), std::move(fns));
  causal::CheckOptions engine_opts{n_cells + 1, true};
  CausalFormula failed = CausalFormula::event("FAIL", "1");

  Explanation e;
  e.method = Explanation::Method::Exact;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto [s, c] = cells[i];
    bool actual = t.value(c, s);
    CandidateCause cand{{{var_names[i], actual ? "1" : "0"}}};
    auto report = causal::check_cause(model, context, cand, failed, engine_opts);
    if (report.is_cause) {
      e.points.push_back({t.alphabet[static_cast<std::size_t>(s)], c, actual});
      e.responsibilities.push_back(report.responsibility);
    }
  }
  return e;
}

namespace {

// Repair-oriented descent: descend(f, pos, needed) is called only when f's
// value at pos is !needed, and marks the cells whose flip could move f
// toward needed. Each (subformula, position, needed) triple is visited at
// most once.
struct ApproxPass {
  const Trace& t;
  int n;
  int loop;  // -1 when finite
  std::map<const void*, std::vector<bool>> tables;
  std::set<std::tuple<const void*, int, bool>> visited;
  int visit_count = 0;
  std::set<std::pair<int, int>> marks;  // (signal index, cycle)

  bool val(const LtlFormula& f, int pos) {
    auto it = tables.find(f.id());
    if (it == tables.end()) it = tables.emplace(f.id(), ltl::eval_positions(t, f)).first;
    return it->second[static_cast<std::size_t>(pos)];
  }

  int succ(int i) const { return i + 1 < n ? i + 1 : loop; }

  // distinct positions reachable from pos, in traversal order
  std::vector<int> range(int pos) const {
    std::vector<int> out;
    std::set<int> seen;
    for (int i = pos; i >= 0 && seen.insert(i).second; i = succ(i)) out.push_back(i);
    return out;
  }

  void descend(const LtlFormula& f, int pos, bool needed) {
    if (!visited.insert({f.id(), pos, needed}).second) return;
    ++visit_count;
    using Op = LtlFormula::Op;
    switch (f.op()) {
      case Op::True:
      case Op::False:
        break;  // constants cannot be repaired
      case Op::Atom:
        marks.insert({t.find_signal(f.atom_name()), pos});
        break;
      case Op::Not:
        descend(f.child(0), pos, !needed);
        break;
      case Op::And:
      case Op::Or:
        // the obstructing operands are exactly those sitting at !needed
        for (int i = 0; i < 2; ++i) {
          auto c = f.child(i);
          if (val(c, pos) != needed) descend(c, pos, needed);
        }
        break;
      case Op::Implies: {
        auto a = f.child(0);
        auto b = f.child(1);
        if (val(a, pos) == needed) descend(a, pos, !needed);
        if (val(b, pos) != needed) descend(b, pos, needed);
        break;
      }
      case Op::Next: {
        int s = succ(pos);
        if (s >= 0) descend(f.child(0), s, needed);
        // at the end of a finite trace no cell can repair X
        break;
      }
      case Op::Eventually:
      case Op::Globally: {
        auto a = f.child(0);
        for (int i : range(pos))
          if (val(a, i) != needed) descend(a, i, needed);
        break;
      }
      case Op::Until: {
        auto a = f.child(0);
        auto b = f.child(1);
        auto reach = range(pos);
        if (needed) {
          // broken a-prefixes can be patched by a contingency, so fulfilling b
          // anywhere before the first position where b already holds repairs
          // the failure. Past that point any patched prefix would satisfy the
          // formula on its own, and the same leak disqualifies a b-cell whose
          // a-chain up to the existing fulfillment is intact. Mending a itself
          // helps wherever a later fulfillment slot remains.
          std::size_t stop = reach.size();
          for (std::size_t i = 0; i < reach.size(); ++i)
            if (val(b, reach[i])) {
              stop = i;
              break;
            }
          bool fulfilled_ahead = stop < reach.size();
          bool broken = false;
          for (std::size_t i = stop; i-- > 0;) {
            if (!val(a, reach[i])) broken = true;
            if (!fulfilled_ahead || broken) descend(b, reach[i], true);
          }
          std::size_t a_end = fulfilled_ahead ? stop : reach.size() - 1;
          for (std::size_t i = 0; i < a_end; ++i)
            if (!val(a, reach[i])) descend(a, reach[i], true);
        } else {
          // break the prefix before the fulfillment, or the fulfillment itself
          for (int r : reach) {
            if (val(b, r)) {
              descend(b, r, false);
              break;
            }
            descend(a, r, false);
          }
        }
        break;
      }
    }
  }
};

}  // namespace

Explanation explain_approx(const Trace& t, const LtlFormula& f) {
  t.validate();
  require_fails(t, f);

  ApproxPass pass{t, t.cycle_count(), t.loop_start ? *t.loop_start : -1, {}, {}, 0, {}};
  pass.descend(f, 0, true);

  Explanation e;
  e.method = Explanation::Method::Approximate;
  e.visited_pairs = pass.visit_count;
  std::vector<std::pair<std::string, int>> named;
  for (auto [sig, c] : pass.marks)
    named.emplace_back(t.alphabet[static_cast<std::size_t>(sig)], c);
  std::sort(named.begin(), named.end());
  for (auto& [name, c] : named)
    e.points.push_back({name, c, t.value(c, t.find_signal(name))});
  return e;
}

std::string render_diagram(const Trace& t, const Explanation& e, const RenderOptions& opts) {
  t.validate();
  std::set<std::pair<int, int>> marked;
  for (const auto& p : e.points) {
    int s = t.find_signal(p.signal);
    if (s >= 0 && p.cycle >= 0 && p.cycle < t.cycle_count())
      marked.insert({s, p.cycle});
  }

  std::size_t label_w = 5;  // "cycle"
  for (const auto& s : t.alphabet) label_w = std::max(label_w, s.size());
  auto pad = [&](const std::string& s) { return s + std::string(label_w - s.size() + 2, ' '); };

  std::string out = pad("cycle");
  for (int c = 0; c < t.cycle_count(); ++c) out += static_cast<char>('0' + c % 10);
  out += '\n';
  for (std::size_t s = 0; s < t.alphabet.size(); ++s) {
    out += pad(t.alphabet[s]);
    for (int c = 0; c < t.cycle_count(); ++c) {
      if (marked.count({static_cast<int>(s), c})) {
        out += opts.color ? "\x1b[31m*\x1b[0m" : "*";
      } else {
        out += t.value(c, static_cast<int>(s)) ? '#' : '.';
      }
    }
    out += '\n';
  }
  if (t.loop_start) {
    out += pad("loop");
    out += std::string(static_cast<std::size_t>(*t.loop_start), ' ');
    out += "^\n";
  }
  if (e.points.empty())
    out += "warning: no explanation points; the failure does not depend on any trace signal\n";
  return out;
}

}  // namespace caver::explain
