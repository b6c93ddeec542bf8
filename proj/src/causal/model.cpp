#include "caver/causal/model.hpp"

#include <algorithm>
#include <numeric>

namespace caver::causal {

Equation Equation::table(std::vector<std::string> inputs, std::map<std::string, std::string> rows) {
  Equation e;
  e.kind = Kind::Table;
  e.inputs = std::move(inputs);
  e.rows = std::move(rows);
  return e;
}

Equation Equation::expression(causal::Expr ex) {
  Equation e;
  e.kind = Kind::Expr;
  e.expr = std::move(ex);
  return e;
}

Equation Equation::native_fn(std::vector<std::string> inputs,
                             std::function<ValueIndex(std::span<const ValueIndex>)> fn) {
  Equation e;
  e.kind = Kind::Native;
  e.inputs = std::move(inputs);
  e.native = std::move(fn);
  return e;
}

namespace {

struct ENode {
  enum class Kind { Var, VarBool, ConstGid, ConstBool, Eq, Not, And, Or, IteB, IteV, FromBool };
  Kind kind;
  VarId var = -1;
  int gid = -1;           // ConstGid; FromBool: gid_true
  int gid_false = -1;     // FromBool
  int a = -1, b = -1, c = -1;
};

}  // namespace

struct CausalModel::CompiledEquation {
  Equation::Kind kind;
  std::vector<VarId> input_ids;

  // Table: flat row-major over input domains, radix[i] = stride of input i.
  std::vector<int> radix;
  std::vector<ValueIndex> table;

  // Expr
  std::vector<ENode> nodes;
  int root = -1;

  std::function<ValueIndex(std::span<const ValueIndex>)> native;
};

namespace {

class ExprCompiler {
public:
  ExprCompiler(const Signature& sig, VarId target, const std::string& target_name,
               CausalModel::CompiledEquation& out)
      : sig_(sig), target_(target), target_name_(target_name), out_(out) {}

  int compile_root(const Expr& e) {
    if (is_bool_shaped(e)) {
      int b = compile_bool(e);
      return wrap_from_bool(b);
    }
    return compile_value(e);
  }

private:
  [[noreturn]] void type_err(const std::string& what) {
    fail(ErrorKind::InvalidModel, "equation for " + target_name_ + ": " + what);
  }

  bool is_bool_shaped(const Expr& e) const {
    switch (e.op()) {
      case Expr::Op::Eq:
      case Expr::Op::Not:
      case Expr::Op::And:
      case Expr::Op::Or:
        return true;
      case Expr::Op::Ite:
        return is_bool_shaped(e.child(1)) || is_bool_shaped(e.child(2));
      default:
        return false;
    }
  }

  int add(ENode n) {
    out_.nodes.push_back(n);
    return static_cast<int>(out_.nodes.size() - 1);
  }

  int wrap_from_bool(int b) {
    if (!sig_.is_boolean_var(target_))
      type_err("boolean expression but domain of " + target_name_ + " is not {0,1}");
    ENode n{ENode::Kind::FromBool};
    n.gid = sig_.global_value_id("1");
    n.gid_false = sig_.global_value_id("0");
    n.a = b;
    return add(n);
  }

  int compile_bool(const Expr& e) {
    switch (e.op()) {
      case Expr::Op::Eq: {
        ENode n{ENode::Kind::Eq};
        n.a = compile_value(e.child(0));
        n.b = compile_value(e.child(1));
        return add(n);
      }
      case Expr::Op::Not: {
        ENode n{ENode::Kind::Not};
        n.a = compile_bool(e.child(0));
        return add(n);
      }
      case Expr::Op::And:
      case Expr::Op::Or: {
        ENode n{e.op() == Expr::Op::And ? ENode::Kind::And : ENode::Kind::Or};
        n.a = compile_bool(e.child(0));
        n.b = compile_bool(e.child(1));
        return add(n);
      }
      case Expr::Op::Ite: {
        ENode n{ENode::Kind::IteB};
        n.c = compile_bool(e.child(0));
        n.a = compile_bool(e.child(1));
        n.b = compile_bool(e.child(2));
        return add(n);
      }
      case Expr::Op::VarRef: {
        if (auto id = sig_.find(e.text())) {
          if (!sig_.is_boolean_var(*id))
            type_err("variable " + e.text() + " used as boolean but domain is not {0,1}");
          ENode n{ENode::Kind::VarBool};
          n.var = *id;
          return add(n);
        }
        return const_bool(e.text());
      }
      case Expr::Op::Lit:
        return const_bool(e.text());
    }
    type_err("unreachable");
  }

  int const_bool(const std::string& text) {
    if (text != "0" && text != "1")
      type_err("value '" + text + "' used as boolean");
    ENode n{ENode::Kind::ConstBool};
    n.gid = text == "1" ? 1 : 0;
    return add(n);
  }

  int compile_value(const Expr& e) {
    switch (e.op()) {
      case Expr::Op::VarRef: {
        if (auto id = sig_.find(e.text())) {
          ENode n{ENode::Kind::Var};
          n.var = *id;
          return add(n);
        }
        return const_gid(e.text());
      }
      case Expr::Op::Lit:
        return const_gid(e.text());
      case Expr::Op::Ite: {
        ENode n{ENode::Kind::IteV};
        n.c = compile_bool(e.child(0));
        n.a = compile_value(e.child(1));
        n.b = compile_value(e.child(2));
        return add(n);
      }
      default:
        return wrap_from_bool(compile_bool(e));
    }
  }

  int const_gid(const std::string& text) {
    int gid = sig_.global_value_id(text);
    if (gid < 0)
      fail(ErrorKind::UnknownVariable, "equation for " + target_name_ + ": '" + text +
           "' is neither a variable nor a known value");
    ENode n{ENode::Kind::ConstGid};
    n.gid = gid;
    return add(n);
  }

  const Signature& sig_;
  VarId target_;
  const std::string& target_name_;
  CausalModel::CompiledEquation& out_;
};

// Returns a gid for value nodes, 0/1 for bool nodes.
int eval_node(const std::vector<ENode>& nodes, int i, const Signature& sig,
              std::span<const ValueIndex> vals) {
  const ENode& n = nodes[static_cast<std::size_t>(i)];
  switch (n.kind) {
    case ENode::Kind::Var:
      return sig.value_gid(n.var, vals[static_cast<std::size_t>(n.var)]);
    case ENode::Kind::VarBool:
      return vals[static_cast<std::size_t>(n.var)] == sig.true_index(n.var) ? 1 : 0;
    case ENode::Kind::ConstGid:
    case ENode::Kind::ConstBool:
      return n.gid;
    case ENode::Kind::Eq:
      return eval_node(nodes, n.a, sig, vals) == eval_node(nodes, n.b, sig, vals) ? 1 : 0;
    case ENode::Kind::Not:
      return eval_node(nodes, n.a, sig, vals) ? 0 : 1;
    case ENode::Kind::And:
      return eval_node(nodes, n.a, sig, vals) && eval_node(nodes, n.b, sig, vals) ? 1 : 0;
    case ENode::Kind::Or:
      return eval_node(nodes, n.a, sig, vals) || eval_node(nodes, n.b, sig, vals) ? 1 : 0;
    case ENode::Kind::IteB:
    case ENode::Kind::IteV:
      return eval_node(nodes, n.c, sig, vals)
                 ? eval_node(nodes, n.a, sig, vals)
                 : eval_node(nodes, n.b, sig, vals);
    case ENode::Kind::FromBool:
      return eval_node(nodes, n.a, sig, vals) ? n.gid : n.gid_false;
  }
  return -1;
}

}  // namespace

CausalModel::CausalModel(Signature signature, std::map<std::string, Equation> functions,
                         std::map<std::string, Context> named_contexts)
    : sig_(std::move(signature)),
      functions_(std::move(functions)),
      named_contexts_(std::move(named_contexts)) {
  const int n_endo = sig_.num_endogenous();
  compiled_.resize(static_cast<std::size_t>(n_endo));
  endo_deps_.resize(static_cast<std::size_t>(n_endo));
  context_determined_.resize(static_cast<std::size_t>(n_endo));

  for (VarId v = sig_.first_endogenous(); v < sig_.num_vars(); ++v) {
    const std::string& name = sig_.variable(v).name;
    auto it = functions_.find(name);
    if (it == functions_.end())
      fail(ErrorKind::InvalidModel, "endogenous variable " + name + " has no equation");
    compile_equation(v, it->second);
  }
  for (const auto& [name, eq] : functions_) {
    VarId id = sig_.id_of(name);
    if (sig_.is_exogenous(id))
      fail(ErrorKind::InvalidModel, "equation given for exogenous variable " + name);
  }
  for (const auto& entry : named_contexts_) resolve_context(entry.second);

  // Kahn with smallest-id-first tie break; leftover nodes witness a cycle.
  std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(n_endo));
  std::vector<int> indegree(static_cast<std::size_t>(n_endo), 0);
  for (int slot = 0; slot < n_endo; ++slot)
    for (VarId dep : endo_deps_[static_cast<std::size_t>(slot)]) {
      out_edges[static_cast<std::size_t>(dep - sig_.first_endogenous())].push_back(slot);
      ++indegree[static_cast<std::size_t>(slot)];
    }
  std::vector<bool> done(static_cast<std::size_t>(n_endo), false);
  topo_.reserve(static_cast<std::size_t>(n_endo));
  for (int round = 0; round < n_endo; ++round) {
    int pick = -1;
    for (int slot = 0; slot < n_endo; ++slot)
      if (!done[static_cast<std::size_t>(slot)] && indegree[static_cast<std::size_t>(slot)] == 0) {
        pick = slot;
        break;
      }
    if (pick < 0) break;
    done[static_cast<std::size_t>(pick)] = true;
    topo_.push_back(sig_.first_endogenous() + pick);
    for (int succ : out_edges[static_cast<std::size_t>(pick)])
      --indegree[static_cast<std::size_t>(succ)];
  }
  if (static_cast<int>(topo_.size()) != n_endo) {
    // Walk dependencies from any unfinished node until one repeats.
    int start = 0;
    while (done[static_cast<std::size_t>(start)]) ++start;
    std::vector<int> path;
    std::vector<int> where(static_cast<std::size_t>(n_endo), -1);
    int cur = start;
    while (where[static_cast<std::size_t>(cur)] < 0) {
      where[static_cast<std::size_t>(cur)] = static_cast<int>(path.size());
      path.push_back(cur);
      for (VarId dep : endo_deps_[static_cast<std::size_t>(cur)]) {
        int slot = dep - sig_.first_endogenous();
        if (!done[static_cast<std::size_t>(slot)]) {
          cur = slot;
          break;
        }
      }
    }
    std::string msg = "dependency cycle: ";
    for (std::size_t i = static_cast<std::size_t>(where[static_cast<std::size_t>(cur)]);
         i < path.size(); ++i)
      msg += sig_.variable(sig_.first_endogenous() + path[i]).name + " -> ";
    msg += sig_.variable(sig_.first_endogenous() + cur).name;
    cycle_error_ = msg;
    topo_.clear();
  }
}

void CausalModel::compile_equation(VarId target, const Equation& eq) {
  const std::string& name = sig_.variable(target).name;
  auto ce = std::make_shared<CompiledEquation>();
  ce->kind = eq.kind;

  auto resolve_inputs = [&](const std::vector<std::string>& names) {
    std::vector<VarId> ids;
    ids.reserve(names.size());
    for (const auto& in : names) {
      auto id = sig_.find(in);
      if (!id)
        fail(ErrorKind::UnknownVariable, "equation for " + name + " reads unknown variable " + in);
      if (*id == target)
        fail(ErrorKind::CyclicModel, "equation for " + name + " reads itself");
      ids.push_back(*id);
    }
    return ids;
  };

  switch (eq.kind) {
    case Equation::Kind::Table: {
      ce->input_ids = resolve_inputs(eq.inputs);
      long long total = 1;
      ce->radix.assign(ce->input_ids.size(), 0);
      for (std::size_t i = ce->input_ids.size(); i-- > 0;) {
        ce->radix[i] = static_cast<int>(total);
        total *= sig_.domain_size(ce->input_ids[i]);
        if (total > (1 << 22))
          fail(ErrorKind::InvalidModel, "table for " + name + " too large");
      }
      ce->table.assign(static_cast<std::size_t>(total), ValueIndex{-1});
      for (const auto& [key, out_val] : eq.rows) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
          std::size_t comma = key.find(',', start);
          parts.push_back(key.substr(start, comma - start));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        if (key.empty()) parts.clear();
        if (parts.size() != ce->input_ids.size())
          fail(ErrorKind::InvalidModel,
               "table row for " + name + " has wrong arity: \"" + key + "\"");
        long long idx = 0;
        for (std::size_t i = 0; i < parts.size(); ++i)
          idx += static_cast<long long>(sig_.value_index(ce->input_ids[i], parts[i])) *
                 ce->radix[i];
        if (ce->table[static_cast<std::size_t>(idx)] != ValueIndex{-1})
          fail(ErrorKind::InvalidModel, "table row for " + name + " repeated: \"" + key + "\"");
        ce->table[static_cast<std::size_t>(idx)] = sig_.value_index(target, out_val);
      }
      for (std::size_t idx = 0; idx < ce->table.size(); ++idx)
        if (ce->table[idx] == ValueIndex{-1}) {
          std::string combo;
          long long rem = static_cast<long long>(idx);
          for (std::size_t i = 0; i < ce->input_ids.size(); ++i) {
            auto vi = static_cast<ValueIndex>(rem / ce->radix[i]);
            rem %= ce->radix[i];
            if (i) combo += ",";
            combo += sig_.value_name(ce->input_ids[i], vi);
          }
          fail(ErrorKind::PartialFunction,
               "table for " + name + " missing row for inputs (" + combo + ")");
        }
      break;
    }
    case Equation::Kind::Expr: {
      if (!eq.expr) fail(ErrorKind::InvalidModel, "equation for " + name + " has no expression");
      std::vector<std::string> mentioned;
      eq.expr->collect_vars(mentioned);
      std::vector<VarId> ids;
      for (const auto& m : mentioned)
        if (auto id = sig_.find(m)) {
          if (*id == target)
            fail(ErrorKind::CyclicModel, "equation for " + name + " reads itself");
          if (std::find(ids.begin(), ids.end(), *id) == ids.end()) ids.push_back(*id);
        }
      ce->input_ids = std::move(ids);
      ExprCompiler compiler(sig_, target, name, *ce);
      ce->root = compiler.compile_root(*eq.expr);
      break;
    }
    case Equation::Kind::Native: {
      if (!eq.native) fail(ErrorKind::InvalidModel, "equation for " + name + " has no function");
      ce->input_ids = resolve_inputs(eq.inputs);
      ce->native = eq.native;
      break;
    }
  }

  const int slot = target - sig_.first_endogenous();
  std::vector<VarId> endo;
  for (VarId d : ce->input_ids)
    if (!sig_.is_exogenous(d)) endo.push_back(d);
  std::sort(endo.begin(), endo.end());
  endo_deps_[static_cast<std::size_t>(slot)] = std::move(endo);
  context_determined_[static_cast<std::size_t>(slot)] =
      endo_deps_[static_cast<std::size_t>(slot)].empty();
  compiled_[static_cast<std::size_t>(slot)] = std::move(ce);
}

std::vector<std::string> CausalModel::validate() const {
  if (!cycle_error_.empty()) fail(ErrorKind::CyclicModel, cycle_error_);
  std::vector<std::string> order;
  order.reserve(topo_.size());
  for (VarId v : topo_) order.push_back(sig_.variable(v).name);
  return order;
}

const std::vector<VarId>& CausalModel::endo_deps(VarId endo) const {
  return endo_deps_[static_cast<std::size_t>(endo - sig_.first_endogenous())];
}

bool CausalModel::context_determined(VarId endo) const {
  return context_determined_[static_cast<std::size_t>(endo - sig_.first_endogenous())];
}

std::span<const VarId> CausalModel::topo_order() const {
  if (!cycle_error_.empty()) fail(ErrorKind::CyclicModel, cycle_error_);
  return topo_;
}

std::vector<ValueIndex> CausalModel::resolve_context(const Context& context) const {
  std::vector<ValueIndex> out(static_cast<std::size_t>(sig_.num_exogenous()), ValueIndex{-1});
  for (const auto& [name, value] : context) {
    VarId id = sig_.id_of(name);
    if (!sig_.is_exogenous(id))
      fail(ErrorKind::InvalidInput, "context sets endogenous variable " + name);
    out[static_cast<std::size_t>(id)] = sig_.value_index(id, value);
  }
  for (VarId u = 0; u < sig_.num_exogenous(); ++u)
    if (out[static_cast<std::size_t>(u)] == ValueIndex{-1})
      fail(ErrorKind::InvalidInput, "context missing exogenous variable " + sig_.variable(u).name);
  return out;
}

std::vector<std::pair<VarId, ValueIndex>> CausalModel::resolve_intervention(
    const Intervention& iv) const {
  std::vector<std::pair<VarId, ValueIndex>> out;
  out.reserve(iv.size());
  for (const auto& [name, value] : iv) {
    VarId id = sig_.id_of(name);
    if (sig_.is_exogenous(id))
      fail(ErrorKind::InvalidInput, "intervention targets exogenous variable " + name);
    for (const auto& [prev, _] : out)
      if (prev == id) fail(ErrorKind::InvalidInput, "intervention repeats variable " + name);
    out.emplace_back(id, sig_.value_index(id, value));
  }
  return out;
}

ValueIndex CausalModel::eval_equation(VarId target, std::span<const ValueIndex> vals) const {
  const auto& ce = *compiled_[static_cast<std::size_t>(target - sig_.first_endogenous())];
  switch (ce.kind) {
    case Equation::Kind::Table: {
      long long idx = 0;
      for (std::size_t i = 0; i < ce.input_ids.size(); ++i)
        idx += static_cast<long long>(vals[static_cast<std::size_t>(ce.input_ids[i])]) *
               ce.radix[i];
      return ce.table[static_cast<std::size_t>(idx)];
    }
    case Equation::Kind::Expr: {
      int gid = eval_node(ce.nodes, ce.root, sig_, vals);
      ValueIndex vi = sig_.index_of_gid(target, gid);
      if (vi < 0)
        fail(ErrorKind::ValueOutOfDomain,
             "equation for " + sig_.variable(target).name + " produced a value outside its domain");
      return vi;
    }
    case Equation::Kind::Native: {
      ValueIndex vi = ce.native(vals);
      if (vi < 0 || vi >= sig_.domain_size(target))
        fail(ErrorKind::ValueOutOfDomain,
             "native equation for " + sig_.variable(target).name + " produced a bad index");
      return vi;
    }
  }
  fail(ErrorKind::InvalidModel, "corrupt equation");
}

void CausalModel::eval_raw(std::span<ValueIndex> out,
                           std::span<const std::pair<VarId, ValueIndex>> forced) const {
  for (const auto& [var, val] : forced) out[static_cast<std::size_t>(var)] = val;
  for (VarId v : topo_order()) {
    bool is_forced = false;
    for (const auto& [var, _] : forced)
      if (var == v) {
        is_forced = true;
        break;
      }
    if (!is_forced) out[static_cast<std::size_t>(v)] = eval_equation(v, out);
  }
}

Assignment CausalModel::evaluate(const Context& context, const Intervention& intervention) const {
  auto ctx = resolve_context(context);
  auto forced = resolve_intervention(intervention);
  std::vector<ValueIndex> vals(static_cast<std::size_t>(sig_.num_vars()), ValueIndex{-1});
  std::copy(ctx.begin(), ctx.end(), vals.begin());
  eval_raw(vals, forced);
  return Assignment(&sig_, std::move(vals));
}

}  // namespace caver::causal
