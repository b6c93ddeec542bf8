#pragma once

#include <optional>
#include <string>
#include <vector>

#include "caver/ltl/formula.hpp"

namespace caver::ltl {

/// Waveform over named boolean signals. With loop_start set the trace is a
/// lasso (cycles from loop_start repeat forever); without it the trace is
/// finite and temporal operators use the weak end-of-trace semantics.
struct Trace {
  std::vector<std::string> alphabet;       // ordered signal names
  std::vector<std::vector<bool>> cycles;   // cycles[c][signal index]
  std::optional<int> loop_start;

  void validate() const;  // >= 1 cycle, rows total, loop_start in range
  int find_signal(std::string_view name) const;  // -1 when absent
  bool value(int cycle, int signal) const {
    return cycles[static_cast<std::size_t>(cycle)][static_cast<std::size_t>(signal)];
  }
  int cycle_count() const { return static_cast<int>(cycles.size()); }

  /// CSV: header of signal names, one 0/1 row per cycle, then an optional
  /// "#loop <index>" pragma line.
  std::string to_csv() const;
  static Trace from_csv(const std::string& text);
};

Trace load_trace(const std::string& path);
void save_trace(const Trace& t, const std::string& path);

/// Truth of f on the trace. Lasso traces use infinite-word semantics by
/// folding positions into the loop; finite traces end weakly: X is false at
/// the last cycle, G holds if every remaining cycle does, F and U must be
/// fulfilled before the end.
bool check_trace(const Trace& t, const LtlFormula& f);

/// Truth of f at every representation position, under the same semantics as
/// check_trace (which is position 0 of this table).
std::vector<bool> eval_positions(const Trace& t, const LtlFormula& f);

}  // namespace caver::ltl
