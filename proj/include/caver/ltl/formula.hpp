#pragma once

#include <memory>
#include <string>
#include <vector>

namespace caver::ltl {

/// Immutable LTL formula tree. Atoms are bare names; X/F/G/U are the
/// temporal operators, true/false the constants.
class LtlFormula {
public:
  enum class Op { True, False, Atom, Not, And, Or, Implies, Next, Eventually, Globally, Until };

  LtlFormula() : LtlFormula(lit(true)) {}

  static LtlFormula lit(bool value);
  static LtlFormula atom(std::string name);
  static LtlFormula negation(LtlFormula a);
  static LtlFormula conj(LtlFormula a, LtlFormula b);
  static LtlFormula disj(LtlFormula a, LtlFormula b);
  static LtlFormula implies(LtlFormula a, LtlFormula b);
  static LtlFormula next(LtlFormula a);
  static LtlFormula eventually(LtlFormula a);
  static LtlFormula globally(LtlFormula a);
  static LtlFormula until(LtlFormula a, LtlFormula b);

  Op op() const { return node_->op; }
  const std::string& atom_name() const { return node_->name; }
  int arity() const;
  LtlFormula child(int i) const;  // 0 = only/left, 1 = right

  /// Stable identity of the shared subtree; useful as a memoization key.
  const void* id() const { return node_.get(); }

  /// ASCII rendering with minimal parentheses; parse_ltl(str()) rebuilds
  /// the same tree.
  std::string str() const;
  bool operator==(const LtlFormula& other) const;
  bool operator!=(const LtlFormula& other) const { return !(*this == other); }

  /// Sorted, deduplicated atom names.
  std::vector<std::string> atoms() const;

private:
  struct Node {
    Op op;
    std::string name;                   // Atom only
    std::shared_ptr<const Node> a, b;   // children where the arity calls for them
    Node(Op o, std::string n) : op(o), name(std::move(n)) {}
  };
  explicit LtlFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Grammar, loosest to tightest: -> (right assoc), |, &, U (right assoc),
/// then ! X F G, then atoms, true, false, parentheses. && and || are
/// accepted for & and |. Errors carry line:col and what was expected.
LtlFormula parse_ltl(const std::string& text);

/// Same, but every atom must come from the alphabet (UnknownAtom otherwise).
LtlFormula parse_ltl(const std::string& text, const std::vector<std::string>& alphabet);

}  // namespace caver::ltl
