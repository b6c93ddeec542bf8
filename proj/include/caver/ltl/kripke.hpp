#pragma once

#include <optional>
#include <string>
#include <vector>

#include "caver/causal/json_io.hpp"
#include "caver/ltl/formula.hpp"
#include "caver/ltl/trace.hpp"

namespace caver::ltl {

using causal::json;

/// Explicit labeled transition graph. Left-total: every state has at least
/// one successor.
struct KripkeStructure {
  std::vector<std::string> atoms;
  std::vector<std::string> states;
  std::vector<int> initial;                // state indices
  std::vector<std::vector<int>> succ;      // succ[s] = successor state indices
  std::vector<std::vector<bool>> labels;   // labels[s][atom index]

  void validate() const;
  int state_index(std::string_view name) const;  // -1 when absent
  int atom_index(std::string_view name) const;   // -1 when absent
};

/// {"atoms": [...], "states": [...], "initial": [...],
///  "edges": [[from, to], ...], "labels": {state: [atoms]}}
KripkeStructure kripke_from_json(const json& j);
json kripke_to_json(const KripkeStructure& k);
KripkeStructure load_kripke(const std::string& path);
void save_kripke(const KripkeStructure& k, const std::string& path);

struct Verdict {
  bool holds = false;
  std::optional<Trace> counterexample;  // violating lasso when !holds
};

/// Reusable checker for one formula. The formula is validated up front;
/// each check() builds its own tables, so concurrent checks are safe.
class BuchiChecker {
public:
  explicit BuchiChecker(const LtlFormula& formula);
  ~BuchiChecker();
  BuchiChecker(BuchiChecker&&) noexcept;
  BuchiChecker& operator=(BuchiChecker&&) noexcept;

  const LtlFormula& formula() const;
  Verdict check(const KripkeStructure& k) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// True iff every infinite path from every initial state satisfies the
/// formula; otherwise a violating lasso is attached.
Verdict check_structure(const KripkeStructure& k, const LtlFormula& formula);

}  // namespace caver::ltl
