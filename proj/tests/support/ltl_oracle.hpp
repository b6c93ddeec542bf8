#pragma once

// Reference implementations for the LTL engine tests: a top-down scanning
// trace evaluator, a path realizability check, and a bounded lasso search
// over a structure. All deliberately unshared with the engine's fixpoint
// and tableau code paths.

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "caver/ltl/kripke.hpp"
#include "caver/ltl/trace.hpp"

namespace caver::testing {

using ltl::KripkeStructure;
using ltl::LtlFormula;
using ltl::Trace;

class OracleTraceEval {
public:
  explicit OracleTraceEval(const Trace& t)
      : t_(t),
        n_(t.cycle_count()),
        loop_(t.loop_start ? *t.loop_start : -1),
        len_(loop_ >= 0 ? n_ - loop_ : 0) {}

  bool value(const LtlFormula& f, int p) {
    p = canonical(p);
    auto key = std::make_pair(f.id(), p);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = compute(f, p);
    memo_.emplace(key, v);
    return v;
  }

private:
  int canonical(int p) const {
    if (loop_ < 0 || p < n_) return p;
    return loop_ + (p - loop_) % len_;
  }

  // how far ahead of p a scan must look to see every distinct future position
  int horizon(int p) const { return loop_ >= 0 ? n_ + len_ : n_ - p; }

  bool compute(const LtlFormula& f, int p) {
    using Op = LtlFormula::Op;
    switch (f.op()) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::Atom: return t_.value(p, t_.find_signal(f.atom_name()));
      case Op::Not: return !value(f.child(0), p);
      case Op::And: return value(f.child(0), p) && value(f.child(1), p);
      case Op::Or: return value(f.child(0), p) || value(f.child(1), p);
      case Op::Implies: return !value(f.child(0), p) || value(f.child(1), p);
      case Op::Next:
        if (loop_ < 0 && p + 1 >= n_) return false;
        return value(f.child(0), p + 1);
      case Op::Eventually: {
        for (int d = 0; d < horizon(p); ++d)
          if (value(f.child(0), p + d)) return true;
        return false;
      }
      case Op::Globally: {
        for (int d = 0; d < horizon(p); ++d)
          if (!value(f.child(0), p + d)) return false;
        return true;
      }
      case Op::Until: {
        bool prefix_ok = true;
        for (int d = 0; d < horizon(p); ++d) {
          if (value(f.child(1), p + d) && prefix_ok) return true;
          prefix_ok = prefix_ok && value(f.child(0), p + d);
          if (!prefix_ok) return false;
        }
        return false;
      }
    }
    return false;
  }

  const Trace& t_;
  int n_, loop_, len_;
  std::map<std::pair<const void*, int>, bool> memo_;
};

inline bool oracle_check_trace(const Trace& t, const LtlFormula& f) {
  OracleTraceEval ev(t);
  return ev.value(f, 0);
}

// Does some infinite path of k produce exactly the trace's label word?
// The trace must be a lasso over k's full alphabet.
inline bool word_realizable(const KripkeStructure& k, const Trace& t) {
  if (!t.loop_start || t.alphabet != k.atoms) return false;
  int n = t.cycle_count(), ls = *t.loop_start;
  auto matches = [&](int s, int cycle) {
    return k.labels[static_cast<std::size_t>(s)] == t.cycles[static_cast<std::size_t>(cycle)];
  };

  std::set<int> entry;  // loop entry candidates consistent with the stem
  for (int s : k.initial)
    if (matches(s, 0)) entry.insert(s);
  for (int j = 1; j <= ls; ++j) {
    std::set<int> next;
    for (int s : entry)
      for (int s2 : k.succ[static_cast<std::size_t>(s)])
        if (matches(s2, j)) next.insert(s2);
    entry = std::move(next);
    if (entry.empty()) return false;
  }

  // one full loop traversal: which loop entries lead back to which
  auto loop_step = [&](int a) {
    std::set<int> frontier{a};
    for (int j = ls + 1; j < n; ++j) {
      std::set<int> next;
      for (int s : frontier)
        for (int s2 : k.succ[static_cast<std::size_t>(s)])
          if (matches(s2, j)) next.insert(s2);
      frontier = std::move(next);
    }
    std::set<int> back;
    for (int s : frontier)
      for (int s2 : k.succ[static_cast<std::size_t>(s)])
        if (matches(s2, ls)) back.insert(s2);
    return back;
  };

  // an infinite run exists iff some entry state can keep traversing forever,
  // which on a finite graph means reaching a loop_step cycle
  std::map<int, std::set<int>> step;
  std::set<int> alive;
  for (std::size_t s = 0; s < k.states.size(); ++s)
    if (matches(static_cast<int>(s), ls)) {
      int a = static_cast<int>(s);
      step[a] = loop_step(a);
      alive.insert(a);
    }
  bool changed = true;  // prune states whose every continuation dies out
  while (changed) {
    changed = false;
    for (auto it = alive.begin(); it != alive.end();) {
      bool ok = false;
      for (int b : step[*it])
        if (alive.count(b)) ok = true;
      if (!ok) {
        it = alive.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  for (int a : entry)
    if (alive.count(a)) return true;
  return false;
}

// Searches every lasso whose stem plus loop has at most max_len states for
// one that violates f. Exact up to the bound, blind past it.
inline bool bounded_violation(const KripkeStructure& k, const LtlFormula& f, int max_len) {
  std::vector<int> path;
  bool found = false;

  auto try_lassos = [&]() {
    int m = static_cast<int>(path.size()) - 1;
    int last = path[static_cast<std::size_t>(m)];
    for (int l = 0; l <= m && !found; ++l) {
      const auto& row = k.succ[static_cast<std::size_t>(last)];
      if (std::find(row.begin(), row.end(), path[static_cast<std::size_t>(l)]) == row.end())
        continue;
      Trace t;
      t.alphabet = k.atoms;
      for (int s : path) t.cycles.push_back(k.labels[static_cast<std::size_t>(s)]);
      t.loop_start = l;
      if (!oracle_check_trace(t, f)) found = true;
    }
  };

  auto dfs = [&](auto&& self, int s) -> void {
    if (found) return;
    path.push_back(s);
    try_lassos();
    if (!found && static_cast<int>(path.size()) < max_len)
      for (int s2 : k.succ[static_cast<std::size_t>(s)]) self(self, s2);
    path.pop_back();
  };

  for (int s0 : k.initial) {
    dfs(dfs, s0);
    if (found) return true;
  }
  return false;
}

}  // namespace caver::testing
