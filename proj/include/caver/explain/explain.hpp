#pragma once

#include <string>
#include <vector>

#include "caver/ltl/formula.hpp"
#include "caver/ltl/trace.hpp"
#include "caver/rational.hpp"

namespace caver::explain {

/// One cell of the trace: this signal's value at this cycle mattered for the
/// failure. `value` is the value the trace actually has there.
struct ExplanationPoint {
  std::string signal;
  int cycle = 0;
  bool value = false;

  friend bool operator==(const ExplanationPoint& a, const ExplanationPoint& b) {
    return a.signal == b.signal && a.cycle == b.cycle && a.value == b.value;
  }
};

struct Explanation {
  enum class Method { Exact, Approximate };

  Method method = Method::Approximate;
  std::vector<ExplanationPoint> points;  // sorted by (signal, cycle)
  /// Parallel to points, exact mode only (empty otherwise).
  std::vector<Rational> responsibilities;
  /// Approximate mode: (subformula, cycle) pairs the descent visited.
  int visited_pairs = 0;

  bool contains(const std::string& signal, int cycle) const;
};

struct ExplainOptions {
  int cap = 24;       // endogenous variable guardrail for the exact search
  bool force = false; // run past the guardrail anyway
};

/// Causes of the failure of f on t, via the actual-cause engine over the
/// trace-as-causal-model: one binary variable per (signal, cycle) cell for
/// the signals f mentions, loop cycles shared. Every singleton cause is a
/// point; responsibilities come from the engine. Fails with FormulaHolds
/// when f holds on t, and CapExceeded when the cell count passes the cap.
Explanation explain_exact(const ltl::Trace& t, const ltl::LtlFormula& f,
                          const ExplainOptions& opts = {});

/// One-pass descent over (subformula, cycle) pairs collecting the cells
/// whose values obstruct f. Visits each pair at most once, so it runs in
/// O(|f| * cycles). Fails with FormulaHolds when f holds on t.
Explanation explain_approx(const ltl::Trace& t, const ltl::LtlFormula& f);

struct RenderOptions {
  bool color = false;  // ANSI red for marked cells
};

/// Fixed-width timing diagram of the trace with explanation points marked:
/// one row per signal, one column per cycle, '#' high, '.' low, '*' marked,
/// a loop caret row for lassos, and a warning footer when the explanation is
/// empty. Byte-deterministic for fixed options.
std::string render_diagram(const ltl::Trace& t, const Explanation& e,
                           const RenderOptions& opts = {});

}  // namespace caver::explain
