#include "caver/causal/model.hpp"

#include <algorithm>

namespace caver::causal {

Signature::Signature(std::vector<Variable> exogenous, std::vector<Variable> endogenous) {
  num_exogenous_ = static_cast<int>(exogenous.size());
  vars_ = std::move(exogenous);
  vars_.insert(vars_.end(), std::make_move_iterator(endogenous.begin()),
               std::make_move_iterator(endogenous.end()));
  if (vars_.empty()) fail(ErrorKind::InvalidModel, "signature has no variables");

  for (VarId id = 0; id < num_vars(); ++id) {
    auto& v = vars_[static_cast<std::size_t>(id)];
    if (v.name.empty()) fail(ErrorKind::InvalidModel, "variable with empty name");
    if (!by_name_.emplace(v.name, id).second)
      fail(ErrorKind::InvalidModel, "duplicate variable name: " + v.name);
    if (v.domain.empty())
      fail(ErrorKind::InvalidModel, "variable " + v.name + " has empty domain");
    for (std::size_t i = 0; i < v.domain.size(); ++i)
      for (std::size_t j = i + 1; j < v.domain.size(); ++j)
        if (v.domain[i] == v.domain[j])
          fail(ErrorKind::InvalidModel,
               "variable " + v.name + " repeats domain value " + v.domain[i]);
    if (v.domain.size() > 1u << 14)
      fail(ErrorKind::InvalidModel, "variable " + v.name + " domain too large");
  }

  gids_.resize(static_cast<std::size_t>(num_vars()));
  bool01_.resize(static_cast<std::size_t>(num_vars()));
  true_idx_.assign(static_cast<std::size_t>(num_vars()), ValueIndex{-1});
  for (VarId id = 0; id < num_vars(); ++id) {
    auto& v = vars_[static_cast<std::size_t>(id)];
    auto& g = gids_[static_cast<std::size_t>(id)];
    g.reserve(v.domain.size());
    for (const auto& val : v.domain) {
      auto [it, _] = value_ids_.emplace(val, static_cast<int>(value_ids_.size()));
      g.push_back(it->second);
    }
    bool zero = false, one = false;
    for (std::size_t i = 0; i < v.domain.size(); ++i) {
      if (v.domain[i] == "0") zero = true;
      if (v.domain[i] == "1") { one = true; true_idx_[static_cast<std::size_t>(id)] = static_cast<ValueIndex>(i); }
    }
    bool01_[static_cast<std::size_t>(id)] = zero && one && v.domain.size() == 2;
    if (!bool01_[static_cast<std::size_t>(id)]) binary_ = false;
  }
}

VarId Signature::id_of(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end())
    fail(ErrorKind::UnknownVariable, "unknown variable: " + std::string(name));
  return it->second;
}

std::optional<VarId> Signature::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

ValueIndex Signature::value_index(VarId var, std::string_view value) const {
  const auto& dom = variable(var).domain;
  for (std::size_t i = 0; i < dom.size(); ++i)
    if (dom[i] == value) return static_cast<ValueIndex>(i);
  fail(ErrorKind::ValueOutOfDomain, "value " + std::string(value) +
       " not in domain of " + variable(var).name);
}

int Signature::global_value_id(std::string_view value) const {
  auto it = value_ids_.find(value);
  return it == value_ids_.end() ? -1 : it->second;
}

ValueIndex Signature::index_of_gid(VarId var, int gid) const {
  const auto& g = gids_[static_cast<std::size_t>(var)];
  auto it = std::find(g.begin(), g.end(), gid);
  if (it == g.end()) return ValueIndex{-1};
  return static_cast<ValueIndex>(it - g.begin());
}

const std::string& Assignment::value(std::string_view var) const {
  VarId id = sig_->id_of(var);
  return sig_->value_name(id, values_[static_cast<std::size_t>(id)]);
}

std::map<std::string, std::string> Assignment::as_map() const {
  std::map<std::string, std::string> out;
  for (VarId id = 0; id < sig_->num_vars(); ++id)
    out[sig_->variable(id).name] = sig_->value_name(id, values_[static_cast<std::size_t>(id)]);
  return out;
}

}  // namespace caver::causal
