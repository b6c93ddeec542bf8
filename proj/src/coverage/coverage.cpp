#include "caver/coverage/coverage.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <span>

#include "caver/causal/actual_cause.hpp"
#include "caver/errors.hpp"

namespace caver::coverage {

using causal::CandidateCause;
using causal::CausalFormula;
using causal::CausalModel;
using causal::Context;
using causal::Equation;
using causal::Signature;
using causal::ValueIndex;
using causal::Variable;
using ltl::KripkeStructure;
using ltl::LtlFormula;

KripkeStructure mutate(const KripkeStructure& k, const Mutation& m) {
  int s = k.state_index(m.state);
  if (s < 0) fail(ErrorKind::UnknownVariable, "no state named '" + m.state + "'");
  int a = k.atom_index(m.atom);
  if (a < 0) fail(ErrorKind::UnknownAtom, "no atom named '" + m.atom + "'");
  KripkeStructure out = k;
  auto& row = out.labels[static_cast<std::size_t>(s)];
  row[static_cast<std::size_t>(a)] = !row[static_cast<std::size_t>(a)];
  return out;
}

namespace {

void require_holds(const ltl::BuchiChecker& checker, const KripkeStructure& k) {
  if (!checker.check(k).holds)
    fail(ErrorKind::SpecificationFails,
         "'" + checker.formula().str() + "' does not hold on the structure; "
         "coverage and vacuity are defined for passing specifications");
}

}  // namespace

CoverageReport coverage_check(const KripkeStructure& k, const LtlFormula& phi,
                              const std::string& atom) {
  k.validate();
  if (k.atom_index(atom) < 0) fail(ErrorKind::UnknownAtom, "no atom named '" + atom + "'");
  ltl::BuchiChecker checker(phi);
  require_holds(checker, k);

  CoverageReport report;
  for (const auto& state : k.states) {
    CoverageEntry e;
    e.state = state;
    e.atom = atom;
    e.covered = !checker.check(mutate(k, {state, atom})).holds;
    e.is_cause = e.covered;
    e.responsibility = e.covered ? Rational(1) : Rational(0);
    if (e.covered) e.witness_mutations.emplace();
    report.entries.push_back(std::move(e));
  }
  return report;
}

namespace {

// Satisfaction of phi as a causal model: one boolean endogenous variable per
// label of interest, fed by a private exogenous variable, plus SAT computed
// by model checking the relabeled structure.
struct LabelBridge {
  std::vector<std::pair<int, int>> slots;  // (state index, atom index)
  std::vector<std::string> var_names;      // parallel to slots
  std::shared_ptr<CausalModel> model;
  Context context;

  LabelBridge(const KripkeStructure& k, const LtlFormula& phi,
              const std::vector<int>& atoms_of_interest) {
    auto checker = std::make_shared<ltl::BuchiChecker>(phi);

    std::vector<Variable> exo, endo;
    for (std::size_t s = 0; s < k.states.size(); ++s)
      for (int a : atoms_of_interest) {
        slots.emplace_back(static_cast<int>(s), a);
        var_names.push_back(k.states[s] + "@" + k.atoms[static_cast<std::size_t>(a)]);
        exo.push_back({"u:" + var_names.back(), causal::VarKind::Exogenous, {"0", "1"}});
        endo.push_back({var_names.back(), causal::VarKind::Endogenous, {"0", "1"}});
        context["u:" + var_names.back()] =
            k.labels[s][static_cast<std::size_t>(a)] ? "1" : "0";
      }
    endo.push_back({"SAT", causal::VarKind::Endogenous, {"0", "1"}});

    Signature sig(std::move(exo), std::move(endo));
    std::vector<causal::VarId> label_ids;
    for (const auto& name : var_names) label_ids.push_back(sig.id_of(name));

    std::map<std::string, Equation> fns;
    for (const auto& name : var_names)
      fns[name] = Equation::expression(causal::Expr::var("u:" + name));
    auto base = std::make_shared<KripkeStructure>(k);
    auto slots_copy = slots;
    fns["SAT"] = Equation::native_fn(
        var_names, [checker, base, slots_copy, label_ids](std::span<const ValueIndex> vals) {
          KripkeStructure relabeled = *base;
          for (std::size_t i = 0; i < slots_copy.size(); ++i) {
            auto [s, a] = slots_copy[i];
            relabeled.labels[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] =
                vals[static_cast<std::size_t>(label_ids[i])] == 1;
          }
          return static_cast<ValueIndex>(checker->check(relabeled).holds ? 1 : 0);
        });
    model = std::make_shared<CausalModel>(std::move(sig), std::move(fns));
  }
};

}  // namespace

CoverageReport causal_coverage(const KripkeStructure& k, const LtlFormula& phi,
                               const std::string& atom, int k_max,
                               const CoverageOptions& options) {
  k.validate();
  std::vector<int> atoms_of_interest;
  if (options.all_atoms) {
    for (std::size_t a = 0; a < k.atoms.size(); ++a) atoms_of_interest.push_back(static_cast<int>(a));
  } else {
    int a = k.atom_index(atom);
    if (a < 0) fail(ErrorKind::UnknownAtom, "no atom named '" + atom + "'");
    atoms_of_interest.push_back(a);
  }

  int n_vars = static_cast<int>(k.states.size() * atoms_of_interest.size());
  if (n_vars + 1 > options.cap && !options.force)
    fail(ErrorKind::CapExceeded,
         std::to_string(k.states.size()) + " states * " +
             std::to_string(atoms_of_interest.size()) + " atoms = " + std::to_string(n_vars) +
             " label variables exceeds the guardrail of " + std::to_string(options.cap - 1) +
             "; pass force to run anyway");

  {
    ltl::BuchiChecker checker(phi);
    require_holds(checker, k);
  }

  LabelBridge bridge(k, phi, atoms_of_interest);
  if (k_max < 0) k_max = n_vars;  // no bound binds beyond the variable count
  causal::CheckOptions engine_opts{n_vars + 1, true};
  CausalFormula sat = CausalFormula::event("SAT", "1");

  CoverageReport report;
  for (std::size_t i = 0; i < bridge.slots.size(); ++i) {
    auto [s, a] = bridge.slots[i];
    CoverageEntry e;
    e.state = k.states[static_cast<std::size_t>(s)];
    e.atom = k.atoms[static_cast<std::size_t>(a)];
    std::string actual = k.labels[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] ? "1" : "0";
    CandidateCause cand{{{bridge.var_names[i], actual}}};

    auto resp = causal::responsibility_bounded(*bridge.model, bridge.context, cand, sat, k_max,
                                               engine_opts);
    if (resp && !resp->is_zero()) {
      e.is_cause = true;
      e.responsibility = *resp;
      e.covered = *resp == Rational(1);
      // second pass only to extract the witness; the minimal contingency is
      // known to be within reach, so this search stops at the same depth
      auto full = causal::check_cause(*bridge.model, bridge.context, cand, sat, engine_opts);
      std::vector<Mutation> flips;
      if (full.witness) {
        for (const auto& [name, value] : full.witness->contingency) {
          auto it = std::find(bridge.var_names.begin(), bridge.var_names.end(), name);
          std::size_t j = static_cast<std::size_t>(it - bridge.var_names.begin());
          auto [ws, wa] = bridge.slots[j];
          std::string was =
              k.labels[static_cast<std::size_t>(ws)][static_cast<std::size_t>(wa)] ? "1" : "0";
          if (value != was)
            flips.push_back({k.states[static_cast<std::size_t>(ws)],
                             k.atoms[static_cast<std::size_t>(wa)]});
        }
      }
      e.witness_mutations = std::move(flips);
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

namespace {

// Rebuilds phi with the pre-order occurrence `target` (counted through
// `counter`) replaced by the polarity-appropriate constant.
LtlFormula replace_occurrence(const LtlFormula& f, int target, int& counter, bool positive) {
  using Op = LtlFormula::Op;
  if (counter++ == target) return LtlFormula::lit(!positive);
  // children rebuilt through named locals: the counter updates must happen
  // left to right
  std::vector<LtlFormula> kids;
  for (int i = 0; i < f.arity(); ++i) {
    bool child_positive = positive;
    if (f.op() == Op::Not || (f.op() == Op::Implies && i == 0)) child_positive = !positive;
    kids.push_back(replace_occurrence(f.child(i), target, counter, child_positive));
  }
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom: return f;
    case Op::Not: return LtlFormula::negation(kids[0]);
    case Op::And: return LtlFormula::conj(kids[0], kids[1]);
    case Op::Or: return LtlFormula::disj(kids[0], kids[1]);
    case Op::Implies: return LtlFormula::implies(kids[0], kids[1]);
    case Op::Next: return LtlFormula::next(kids[0]);
    case Op::Eventually: return LtlFormula::eventually(kids[0]);
    case Op::Globally: return LtlFormula::globally(kids[0]);
    case Op::Until: return LtlFormula::until(kids[0], kids[1]);
  }
  return f;
}

void list_occurrences(const LtlFormula& f, bool positive,
                      std::vector<std::pair<std::string, bool>>& out) {
  using Op = LtlFormula::Op;
  out.emplace_back(f.str(), positive);
  switch (f.op()) {
    case Op::Not: list_occurrences(f.child(0), !positive, out); break;
    case Op::Implies:
      list_occurrences(f.child(0), !positive, out);
      list_occurrences(f.child(1), positive, out);
      break;
    default:
      for (int i = 0; i < f.arity(); ++i) list_occurrences(f.child(i), positive, out);
  }
}

}  // namespace

VacuityReport vacuity_check(const KripkeStructure& k, const LtlFormula& phi) {
  k.validate();
  {
    ltl::BuchiChecker checker(phi);
    require_holds(checker, k);
  }

  std::vector<std::pair<std::string, bool>> occurrences;
  list_occurrences(phi, true, occurrences);

  VacuityReport report;
  for (std::size_t i = 0; i < occurrences.size(); ++i) {
    VacuityEntry e;
    e.occurrence = occurrences[i].first;
    bool positive = occurrences[i].second;
    e.replaced_with = positive ? "false" : "true";
    int counter = 0;
    LtlFormula weakened = replace_occurrence(phi, static_cast<int>(i), counter, true);
    e.vacuous = ltl::check_structure(k, weakened).holds;
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace caver::coverage
