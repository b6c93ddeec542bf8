#pragma once

#include <optional>
#include <string>
#include <vector>

#include "caver/ltl/formula.hpp"
#include "caver/ltl/kripke.hpp"
#include "caver/rational.hpp"

namespace caver::coverage {

/// One label flip: toggle `atom` at `state`.
struct Mutation {
  std::string state;
  std::string atom;
};

struct CoverageEntry {
  std::string state;
  std::string atom;
  bool covered = false;   // flipping this label alone falsifies the spec
  bool is_cause = false;  // some contingency of other flips creates dependence
  Rational responsibility;
  // Contingency flips backing the responsibility; empty when covered,
  // absent when not a cause (or outside the k_max search bound).
  std::optional<std::vector<Mutation>> witness_mutations;
};

/// Entries in state order (state-major, atom order within a state when the
/// analysis spans all atoms).
struct CoverageReport {
  std::vector<CoverageEntry> entries;
};

struct VacuityEntry {
  std::string occurrence;     // the subformula occurrence, as text
  std::string replaced_with;  // "false" for positive polarity, "true" for negative
  bool vacuous = false;
};

/// One entry per subformula occurrence, in syntactic (pre-order) order.
struct VacuityReport {
  std::vector<VacuityEntry> entries;
  bool any_vacuous() const {
    for (const auto& e : entries)
      if (e.vacuous) return true;
    return false;
  }
};

/// Copy of k with one label flipped. UnknownAtom/UnknownVariable on bad names.
ltl::KripkeStructure mutate(const ltl::KripkeStructure& k, const Mutation& m);

/// Plain mutation coverage: a state is covered iff flipping `atom` there
/// falsifies phi. SpecificationFails unless phi holds on k.
CoverageReport coverage_check(const ltl::KripkeStructure& k, const ltl::LtlFormula& phi,
                              const std::string& atom);

struct CoverageOptions {
  bool all_atoms = false;  // analyze every (state, atom) pair, ignoring `atom`
  int cap = 24;            // guardrail on state*atom variable count
  bool force = false;
};

/// Causal coverage: embeds the labels of interest as a causal model (one
/// binary variable per (state, atom) pair, satisfaction of phi as the
/// outcome) and reports each pair's cause status, responsibility, and
/// witness contingency. Witness search is truncated at contingencies of
/// size k_max; pairs whose minimal contingency is larger are reported as
/// non-causes at this bound. k_max < 0 means exact.
CoverageReport causal_coverage(const ltl::KripkeStructure& k, const ltl::LtlFormula& phi,
                               const std::string& atom, int k_max,
                               const CoverageOptions& options = {});

/// Per-occurrence vacuity: replaces each subformula occurrence by false
/// (positive polarity) or true (negative polarity); the occurrence is
/// vacuous iff the weakened formula still holds on k.
VacuityReport vacuity_check(const ltl::KripkeStructure& k, const ltl::LtlFormula& phi);

}  // namespace caver::coverage
