#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "caver/rational.hpp"
#include "caver/ste/circuit.hpp"

namespace caver::ste {

struct OrderOptions {
  int cap = 12;                // X-inputs the exact causal search will take on
  bool allow_fallback = true;  // past the cap: structural score instead of CapExceeded
};

struct ScoredInput {
  std::string name;
  Rational score;
};

struct ResponsibilityOrder {
  std::vector<ScoredInput> inputs;  // descending score, ties by name; positives only
  bool exact = true;                // false when the structural fallback was used
};

/// Ranks the X-inputs that can still influence the named output by their
/// degree of responsibility for it being X. The causal model has one boolean
/// "this input is known" variable per X-input; the output counts as
/// determined under a set of knowns when every boolean refinement of them
/// evaluates to a definite value.
ResponsibilityOrder responsibility_order(const TernaryCircuit& c, const TernaryAssignment& a,
                                         const std::string& output,
                                         const OrderOptions& options = {});

enum class Strategy { Responsibility, Random, Topo };

const char* to_string(Strategy s);
Strategy strategy_from(std::string_view text);  // "responsibility", "random" or "topo"

struct RefineOptions {
  Strategy strategy = Strategy::Responsibility;
  std::uint64_t seed = 0;  // drives the random strategy only
  OrderOptions order;
};

struct RefinementStep {
  std::string node;
  std::vector<Ternary> branches;  // values explored, in order
};

struct RefinementTrace {
  std::vector<RefinementStep> steps;       // depth-first, 0-branch first
  int instantiations = 0;                  // total splits over the branch tree
  std::map<std::string, bool> determined;  // circuit output -> definite in every branch
};

/// Case-splits X-inputs until the named output is definite in every branch.
RefinementTrace refine(const TernaryCircuit& c, const TernaryAssignment& a,
                       const std::string& output, const RefineOptions& options = {});

}  // namespace caver::ste
