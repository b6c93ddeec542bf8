#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "caver/errors.hpp"

namespace caver::causal {

using VarId = std::int32_t;
using ValueIndex = std::int16_t;

enum class VarKind { Exogenous, Endogenous };

struct Variable {
  std::string name;
  VarKind kind;
  std::vector<std::string> domain;  // ordered, nonempty
};

/// Variable universe of a causal model: exogenous block first, then
/// endogenous, each in declaration order. Value strings are interned to
/// global ids so equation evaluation compares ints, never strings.
class Signature {
public:
  Signature(std::vector<Variable> exogenous, std::vector<Variable> endogenous);

  const std::vector<Variable>& variables() const { return vars_; }
  const Variable& variable(VarId id) const { return vars_[static_cast<std::size_t>(id)]; }
  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_exogenous() const { return num_exogenous_; }
  int num_endogenous() const { return num_vars() - num_exogenous_; }
  bool is_exogenous(VarId id) const { return id < num_exogenous_; }
  VarId first_endogenous() const { return num_exogenous_; }

  VarId id_of(std::string_view name) const;            // throws UnknownVariable
  std::optional<VarId> find(std::string_view name) const;

  ValueIndex value_index(VarId var, std::string_view value) const;  // throws ValueOutOfDomain
  const std::string& value_name(VarId var, ValueIndex idx) const {
    return variable(var).domain[static_cast<std::size_t>(idx)];
  }
  int domain_size(VarId var) const { return static_cast<int>(variable(var).domain.size()); }

  /// Global id of a value string; every value appearing in any domain has one.
  int global_value_id(std::string_view value) const;   // -1 when unknown
  int value_gid(VarId var, ValueIndex idx) const { return gids_[static_cast<std::size_t>(var)][static_cast<std::size_t>(idx)]; }
  /// Index of `gid` within var's domain, or -1.
  ValueIndex index_of_gid(VarId var, int gid) const;

  bool is_binary() const { return binary_; }
  /// True when the domain is exactly {"0","1"} in either order.
  bool is_boolean_var(VarId var) const { return bool01_[static_cast<std::size_t>(var)]; }
  /// Index of "1" within a boolean var's domain.
  ValueIndex true_index(VarId var) const { return true_idx_[static_cast<std::size_t>(var)]; }

private:
  std::vector<Variable> vars_;
  int num_exogenous_ = 0;
  std::map<std::string, VarId, std::less<>> by_name_;
  std::map<std::string, int, std::less<>> value_ids_;
  std::vector<std::vector<int>> gids_;    // var -> domain idx -> global value id
  std::vector<bool> bool01_;
  std::vector<ValueIndex> true_idx_;
  bool binary_ = true;
};

/// Structural-equation expression tree. Nodes reference variables by name;
/// binding against a signature happens at model construction.
class Expr {
public:
  enum class Op { VarRef, Lit, Eq, Not, And, Or, Ite };

  static Expr var(std::string name);
  static Expr lit(std::string value);
  static Expr eq(Expr a, Expr b);
  static Expr negation(Expr a);
  static Expr conj(Expr a, Expr b);
  static Expr disj(Expr a, Expr b);
  static Expr ite(Expr c, Expr a, Expr b);

  Op op() const { return node_->op; }
  const std::string& text() const { return node_->text; }  // VarRef name / Lit value
  const Expr& child(int i) const { return node_->kids[static_cast<std::size_t>(i)]; }
  int arity() const { return static_cast<int>(node_->kids.size()); }

  /// Canonical infix form (the file-format grammar).
  std::string str() const;

  /// Variables mentioned anywhere in the tree.
  void collect_vars(std::vector<std::string>& out) const;

private:
  struct Node {
    Op op;
    std::string text;
    std::vector<Expr> kids;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses the equation grammar:
///   expr    := or
///   or      := and ('|' and)*
///   and     := unary ('&' unary)*
///   unary   := '!' unary | primary
///   primary := '(' expr ')' | 'ite' '(' expr ',' expr ',' expr ')' | term ('=' term)?
///   term    := IDENT | NUMBER | 'quoted'
Expr parse_expr(const std::string& text);

/// One structural function. Exactly one representation is active.
struct Equation {
  enum class Kind { Table, Expr, Native };
  Kind kind = Kind::Expr;

  // Table / Native: declared inputs. Expr: mentioned variables (derived).
  std::vector<std::string> inputs;

  // Table: row map keyed by comma-joined input values, in input order.
  std::map<std::string, std::string> rows;

  // Expr
  std::optional<causal::Expr> expr;

  // Native: reads the full assignment-so-far (indexed by VarId), returns the
  // target's value index. Must only read declared inputs.
  std::function<ValueIndex(std::span<const ValueIndex>)> native;

  static Equation table(std::vector<std::string> inputs, std::map<std::string, std::string> rows);
  static Equation expression(causal::Expr e);
  static Equation expression(const std::string& text) { return expression(parse_expr(text)); }
  static Equation native_fn(std::vector<std::string> inputs,
                            std::function<ValueIndex(std::span<const ValueIndex>)> fn);
};

/// Total assignment over U ∪ V, bound to the model it came from.
class Assignment {
public:
  Assignment(const Signature* sig, std::vector<ValueIndex> values)
      : sig_(sig), values_(std::move(values)) {}

  const std::string& value(std::string_view var) const;
  std::map<std::string, std::string> as_map() const;
  std::span<const ValueIndex> raw() const { return values_; }

private:
  const Signature* sig_;
  std::vector<ValueIndex> values_;
};

/// Total setting of the exogenous variables.
using Context = std::map<std::string, std::string>;

/// Partial forcing of endogenous variables (ordered, distinct keys).
using Intervention = std::vector<std::pair<std::string, std::string>>;

class CausalModel {
public:
  /// Structural checks (names, domains, totality, typing) throw immediately;
  /// acyclicity is checked here too but surfaces through validate()/evaluate().
  CausalModel(Signature signature, std::map<std::string, Equation> functions,
              std::map<std::string, Context> named_contexts = {});

  const Signature& signature() const { return sig_; }
  const std::map<std::string, Equation>& functions() const { return functions_; }
  const std::map<std::string, Context>& named_contexts() const { return named_contexts_; }

  /// Topological order of the endogenous variables (declaration-order ties).
  /// Throws CyclicModel with one concrete cycle listed.
  std::vector<std::string> validate() const;

  /// Endogenous variables the named one depends on, directly.
  const std::vector<VarId>& endo_deps(VarId endo) const;
  /// True when the equation mentions no endogenous variable, so the value is
  /// pinned by the context alone under any intervention not forcing it.
  bool context_determined(VarId endo) const;

  Assignment evaluate(const Context& context, const Intervention& intervention = {}) const;

  // --- engine-facing fast path -------------------------------------------

  /// Context resolved to value indices (exogenous prefix of the var array).
  std::vector<ValueIndex> resolve_context(const Context& context) const;
  std::vector<std::pair<VarId, ValueIndex>> resolve_intervention(const Intervention& iv) const;

  /// Evaluates into `out` (size num_vars): exogenous prefix must already be
  /// filled; forced pairs override equations. Topological order, no checks.
  void eval_raw(std::span<ValueIndex> out,
                std::span<const std::pair<VarId, ValueIndex>> forced) const;

  std::span<const VarId> topo_order() const;  // endogenous ids, throws if cyclic

  struct CompiledEquation;  // internal, defined in model.cpp

private:
  void compile_equation(VarId target, const Equation& eq);
  ValueIndex eval_equation(VarId target, std::span<const ValueIndex> vals) const;

  Signature sig_;
  std::map<std::string, Equation> functions_;
  std::map<std::string, Context> named_contexts_;
  std::vector<std::shared_ptr<const CompiledEquation>> compiled_;  // by endo slot
  std::vector<std::vector<VarId>> endo_deps_;                      // by endo slot
  std::vector<bool> context_determined_;                           // by endo slot
  std::vector<VarId> topo_;       // valid iff cycle_error_ empty
  std::string cycle_error_;

  friend class Evaluator;
};

/// Primitive-event / boolean-combination causal formula with an optional
/// intervention prefix at the root: [Y<-y] phi.
class CausalFormula {
public:
  enum class Op { Event, Not, And, Or };

  static CausalFormula event(std::string var, std::string value);
  static CausalFormula negation(CausalFormula a);
  static CausalFormula conj(CausalFormula a, CausalFormula b);
  static CausalFormula disj(CausalFormula a, CausalFormula b);
  CausalFormula with_prefix(Intervention prefix) const;

  /// Grammar: ['[' NAME '<-' VALUE (',' NAME '<-' VALUE)* ']'] bool-expr,
  /// where bool-expr uses NAME=VALUE events, '!', '&', '|', parentheses.
  static CausalFormula parse(const std::string& text);

  const Intervention& prefix() const { return prefix_; }
  bool has_prefix() const { return !prefix_.empty(); }
  std::string str() const;

  /// All variables mentioned in events (prefix excluded).
  std::vector<std::string> event_vars() const;

  Op op() const { return node_->op; }
  const std::string& var() const { return node_->var; }
  const std::string& value() const { return node_->value; }
  const CausalFormula& child(int i) const { return node_->kids[static_cast<std::size_t>(i)]; }

private:
  struct Node {
    Op op;
    std::string var, value;
    std::vector<CausalFormula> kids;
  };
  explicit CausalFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  Intervention prefix_;
};

/// Intervention-free formula compiled against a model for repeated checks.
class CompiledFormula {
public:
  CompiledFormula(const CausalModel& model, const CausalFormula& formula);
  bool eval(std::span<const ValueIndex> vals) const;
  /// Variables mentioned in events, deduplicated. Callers that need the
  /// formula restricted to endogenous variables enforce that themselves.
  const std::vector<VarId>& vars() const { return vars_; }

private:
  struct CNode {
    CausalFormula::Op op;
    VarId var;
    ValueIndex idx;
    int a = -1, b = -1;
  };
  int compile(const CausalModel& model, const CausalFormula& f);
  std::vector<CNode> nodes_;
  int root_;
  std::vector<VarId> vars_;
};

/// Decides (M, u) |= phi, handling an optional intervention prefix.
bool holds(const CausalModel& model, const Context& context, const CausalFormula& formula);

}  // namespace caver::causal
