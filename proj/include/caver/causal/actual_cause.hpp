#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "caver/causal/model.hpp"
#include "caver/rational.hpp"

namespace caver::causal {

/// Conjunction X1=x1 & ... & Xk=xk over endogenous variables. An empty value
/// string is boolean shorthand, resolved against the domain when checked.
struct CandidateCause {
  std::vector<std::pair<std::string, std::string>> conjuncts;

  /// Accepts "A=1", "A=1 & B=0", bare names for boolean variables.
  static CandidateCause parse(const std::string& text);
  std::string str() const;
};

struct Witness {
  std::vector<std::pair<std::string, std::string>> contingency;  // W=w, name-sorted
  std::vector<std::pair<std::string, std::string>> alt_values;   // X=x', candidate order
  std::vector<std::pair<std::string, std::string>> z_star;       // V\W actual values, name-sorted
};

enum class Condition { AC1, AC2, AC3 };
inline const char* to_string(Condition c) {
  switch (c) {
    case Condition::AC1: return "AC1";
    case Condition::AC2: return "AC2";
    case Condition::AC3: return "AC3";
  }
  return "?";
}

struct CauseReport {
  CandidateCause candidate;
  bool is_cause = false;
  std::optional<Witness> witness;             // minimum-|W| witness when is_cause
  Rational responsibility;                    // 1/(k+1) or 0
  std::optional<Condition> failed_condition;  // first failed condition otherwise
};

struct CheckOptions {
  int cap = 24;        // refuse models with more endogenous variables than this
  bool force = false;  // run anyway
};

/// Decides whether the candidate is an actual cause of formula under
/// (model, context): AC1 directly, AC2 by increasing-|W| witness search,
/// AC3 over strict nonempty conjunct subsets.
CauseReport check_cause(const CausalModel& model, const Context& context,
                        const CandidateCause& candidate, const CausalFormula& formula,
                        const CheckOptions& options = {});

/// 0 when not a cause, else 1/(k+1) for the minimum witness size k.
Rational responsibility(const CausalModel& model, const Context& context,
                        const CandidateCause& candidate, const CausalFormula& formula,
                        const CheckOptions& options = {});

/// Witness search truncated at |W| = k_max. nullopt means below threshold:
/// the responsibility is < 1/(k_max+1), possibly 0. Minimality (AC3) is still
/// decided exactly, so a returned value always equals the unbounded one.
std::optional<Rational> responsibility_bounded(const CausalModel& model, const Context& context,
                                               const CandidateCause& candidate,
                                               const CausalFormula& formula, int k_max,
                                               const CheckOptions& options = {});

/// Every cause with at most max_conjuncts conjuncts whose values match the
/// actual solution, sorted by descending responsibility then variable order.
std::vector<CauseReport> find_causes(const CausalModel& model, const Context& context,
                                     const CausalFormula& formula, int max_conjuncts,
                                     const CheckOptions& options = {});

/// (K, Pr): alternative situations with exact probabilities summing to 1.
struct EpistemicState {
  struct Situation {
    std::shared_ptr<const CausalModel> model;
    Context context;
    Rational probability;
  };
  std::vector<Situation> situations;

  void validate() const;  // nonnegative probabilities, exact sum 1
};

/// File layout:
/// {"situations": [{"model": "file.json", "context": "preset"|{...},
///                  "probability": "1/10"}, ...]}
/// Model paths resolve relative to the file's directory.
EpistemicState load_epistemic(const std::string& path);

/// Expected degree of responsibility of the setting X<-x for the formula,
/// over the epistemic state: dr is evaluated in each M_{i, X<-x} (equations
/// of X replaced by the constants x), taken as 0 where AC1 fails there.
Rational blame(const EpistemicState& state, const Intervention& setting,
               const CausalFormula& formula, const CheckOptions& options = {});

}  // namespace caver::causal
