#include "caver/causal/actual_cause.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <unordered_map>

#include "caver/causal/json_io.hpp"

namespace caver::causal {

CandidateCause CandidateCause::parse(const std::string& text) {
  CausalFormula f = CausalFormula::parse(text);
  if (f.has_prefix())
    fail(ErrorKind::InvalidInput, "candidate cannot carry an intervention: " + text);
  CandidateCause c;
  auto walk = [&](auto&& self, const CausalFormula& g) -> void {
    if (g.op() == CausalFormula::Op::And) {
      self(self, g.child(0));
      self(self, g.child(1));
      return;
    }
    if (g.op() == CausalFormula::Op::Event) {
      c.conjuncts.emplace_back(g.var(), g.value());
      return;
    }
    fail(ErrorKind::InvalidInput, "candidate must be a conjunction of events: " + text);
  };
  walk(walk, f);
  return c;
}

std::string CandidateCause::str() const {
  std::string out;
  for (std::size_t i = 0; i < conjuncts.size(); ++i) {
    if (i) out += " & ";
    out += conjuncts[i].first;
    if (!conjuncts[i].second.empty()) out += "=" + conjuncts[i].second;
  }
  return out;
}

namespace {

using Forced = std::vector<std::pair<VarId, ValueIndex>>;

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= static_cast<std::size_t>(x);
      h *= 1099511628211ull;
      h ^= static_cast<std::size_t>(x >> 32);
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct World {
  bool phi;
  std::vector<VarId> diff;  // endogenous variables differing from the actual solution
};

struct RawWitness {
  std::vector<VarId> wvars;          // name-sorted
  std::vector<ValueIndex> wvals;
  std::vector<ValueIndex> xprime;    // candidate order
};

class Engine {
public:
  Engine(const CausalModel& m, const Context& ctx, const CausalFormula& formula)
      : m_(m), sig_(m.signature()), phi_(m, formula) {
    if (formula.has_prefix())
      fail(ErrorKind::InvalidInput, "formula must be intervention-free");
    for (VarId v : phi_.vars())
      if (sig_.is_exogenous(v))
        fail(ErrorKind::FormulaMentionsExogenous,
             "formula mentions exogenous variable " + sig_.variable(v).name);
    auto resolved = m.resolve_context(ctx);
    actual_.assign(static_cast<std::size_t>(sig_.num_vars()), ValueIndex{-1});
    std::copy(resolved.begin(), resolved.end(), actual_.begin());
    m.eval_raw(actual_, {});
    children_.resize(static_cast<std::size_t>(sig_.num_endogenous()));
    for (VarId v = sig_.first_endogenous(); v < sig_.num_vars(); ++v)
      for (VarId d : m.endo_deps(v)) children_[slot(d)].push_back(v);
  }

  std::span<const ValueIndex> actual() const { return actual_; }
  bool phi_on_actual() { return phi_.eval(actual_); }
  const Signature& sig() const { return sig_; }

  /// Minimum-size witness via increasing-|W| enumeration; W subsets walk the
  /// name-sorted variable list so ties resolve to the lexicographically least
  /// (W, then w, then x') triple.
  std::optional<RawWitness> search(const std::vector<VarId>& xvars,
                                   const std::vector<ValueIndex>& xvals, int max_k) {
    std::vector<VarId> eligible;
    for (VarId v = sig_.first_endogenous(); v < sig_.num_vars(); ++v)
      if (std::find(xvars.begin(), xvars.end(), v) == xvars.end()) eligible.push_back(v);
    std::sort(eligible.begin(), eligible.end(), [&](VarId a, VarId b) {
      return sig_.variable(a).name < sig_.variable(b).name;
    });

    Forced xpairs;
    for (std::size_t i = 0; i < xvars.size(); ++i) xpairs.emplace_back(xvars[i], xvals[i]);
    std::sort(xpairs.begin(), xpairs.end());

    const int n = static_cast<int>(eligible.size());
    max_k = std::min(max_k, n);
    std::vector<VarId> wvars;
    std::vector<ValueIndex> wvals;
    for (int k = 0; k <= max_k; ++k) {
      std::vector<int> comb(static_cast<std::size_t>(k));
      std::iota(comb.begin(), comb.end(), 0);
      while (true) {
        wvars.clear();
        for (int c : comb) wvars.push_back(eligible[static_cast<std::size_t>(c)]);
        if (auto xp = try_subset(xpairs, xvars, xvals, wvars, wvals))
          return RawWitness{wvars, wvals, *xp};
        int i = k - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) break;
        ++comb[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
          comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    return std::nullopt;
  }

  /// AC3: some strict nonempty conjunct subset already satisfies AC2.
  bool minimal(const std::vector<VarId>& xvars, const std::vector<ValueIndex>& xvals) {
    const std::size_t c = xvars.size();
    for (std::uint32_t mask = 1; mask + 1 < (1u << c); ++mask) {
      std::vector<VarId> sub;
      std::vector<ValueIndex> subv;
      for (std::size_t i = 0; i < c; ++i)
        if (mask & (1u << i)) {
          sub.push_back(xvars[i]);
          subv.push_back(xvals[i]);
        }
      if (search(sub, subv, sig_.num_endogenous()).has_value()) return false;
    }
    return true;
  }

private:
  std::size_t slot(VarId v) const { return static_cast<std::size_t>(v - sig_.first_endogenous()); }

  World world(Forced forced) {
    std::sort(forced.begin(), forced.end());
    std::vector<std::uint64_t> key;
    key.reserve(forced.size());
    for (const auto& [var, val] : forced)
      key.push_back((static_cast<std::uint64_t>(static_cast<std::uint32_t>(var)) << 16) |
                    static_cast<std::uint16_t>(val));
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    std::vector<ValueIndex> buf = actual_;
    m_.eval_raw(buf, forced);
    World w;
    w.phi = phi_.eval(buf);
    for (VarId v = sig_.first_endogenous(); v < sig_.num_vars(); ++v)
      if (buf[static_cast<std::size_t>(v)] != actual_[static_cast<std::size_t>(v)])
        w.diff.push_back(v);
    if (cache_.size() < (1u << 20)) cache_.emplace(std::move(key), w);
    return w;
  }

  /// For fixed W: first w (domain order, vacuous forcings of context-pinned
  /// variables skipped), first x' passing AC2(a), then the full AC2(b) sweep.
  std::optional<std::vector<ValueIndex>> try_subset(const Forced& xpairs,
                                                    const std::vector<VarId>& xvars,
                                                    const std::vector<ValueIndex>& xvals,
                                                    const std::vector<VarId>& wvars,
                                                    std::vector<ValueIndex>& wvals_out) {
    const std::size_t k = wvars.size();
    std::vector<std::vector<ValueIndex>> allowed(k);
    for (std::size_t i = 0; i < k; ++i) {
      VarId v = wvars[i];
      bool pinned = m_.context_determined(v);
      for (ValueIndex val = 0; val < sig_.domain_size(v); ++val)
        if (!pinned || val != actual_[static_cast<std::size_t>(v)]) allowed[i].push_back(val);
      if (allowed[i].empty()) return std::nullopt;
    }

    std::vector<std::size_t> odo(k, 0);
    while (true) {
      wvals_out.resize(k);
      for (std::size_t i = 0; i < k; ++i) wvals_out[i] = allowed[i][odo[i]];

      if (auto xp = first_ac2a(xpairs, xvars, xvals, wvars, wvals_out))
        if (ac2b(xpairs, wvars, wvals_out)) return xp;

      std::size_t i = k;
      while (i-- > 0) {
        if (++odo[i] < allowed[i].size()) break;
        odo[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
      if (k == 0) break;
    }
    return std::nullopt;
  }

  std::optional<std::vector<ValueIndex>> first_ac2a(const Forced& xpairs,
                                                    const std::vector<VarId>& xvars,
                                                    const std::vector<ValueIndex>& xvals,
                                                    const std::vector<VarId>& wvars,
                                                    const std::vector<ValueIndex>& wvals) {
    (void)xpairs;
    const std::size_t c = xvars.size();
    std::vector<ValueIndex> xp(c, 0);
    while (true) {
      if (!std::equal(xp.begin(), xp.end(), xvals.begin())) {
        Forced forced;
        for (std::size_t i = 0; i < c; ++i) forced.emplace_back(xvars[i], xp[i]);
        for (std::size_t i = 0; i < wvars.size(); ++i) forced.emplace_back(wvars[i], wvals[i]);
        if (!world(std::move(forced)).phi) return xp;
      }
      std::size_t i = c;
      while (i-- > 0) {
        if (++xp[i] < sig_.domain_size(xvars[i])) break;
        xp[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    return std::nullopt;
  }

  bool ac2b(const Forced& xpairs, const std::vector<VarId>& wvars,
            const std::vector<ValueIndex>& wvals) {
    const std::size_t k = wvars.size();
    std::vector<bool> in_zx(static_cast<std::size_t>(sig_.num_vars()), false);
    for (VarId v = sig_.first_endogenous(); v < sig_.num_vars(); ++v)
      in_zx[static_cast<std::size_t>(v)] = true;
    for (const auto& [v, _] : xpairs) in_zx[static_cast<std::size_t>(v)] = false;
    for (VarId v : wvars) in_zx[static_cast<std::size_t>(v)] = false;

    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      Forced forced = xpairs;
      std::vector<bool> barrier(static_cast<std::size_t>(sig_.num_vars()), false);
      for (const auto& [v, _] : xpairs) barrier[static_cast<std::size_t>(v)] = true;
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (1u << i)) {
          forced.emplace_back(wvars[i], wvals[i]);
          barrier[static_cast<std::size_t>(wvars[i])] = true;
        }
      World s = world(forced);
      if (!s.phi) return false;

      // Forcing a Z' variable whose value already equals z* is vacuous, and
      // changes only propagate downstream of genuinely changed variables, so
      // only subsets of that closed region need explicit checks.
      std::vector<VarId> region;
      std::vector<bool> seen(static_cast<std::size_t>(sig_.num_vars()), false);
      std::vector<VarId> queue;
      for (VarId v : s.diff)
        if (in_zx[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          queue.push_back(v);
        }
      while (!queue.empty()) {
        VarId v = queue.back();
        queue.pop_back();
        if (in_zx[static_cast<std::size_t>(v)]) region.push_back(v);
        for (VarId child : children_[slot(v)])
          if (!seen[static_cast<std::size_t>(child)] &&
              !barrier[static_cast<std::size_t>(child)]) {
            seen[static_cast<std::size_t>(child)] = true;
            queue.push_back(child);
          }
      }
      if (region.empty()) continue;
      std::sort(region.begin(), region.end());
      if (region.size() > 25)
        fail(ErrorKind::CapExceeded, "contingency region too large to enumerate");

      for (std::uint32_t zmask = 1; zmask < (1u << region.size()); ++zmask) {
        Forced forced2 = forced;
        for (std::size_t i = 0; i < region.size(); ++i)
          if (zmask & (1u << i))
            forced2.emplace_back(region[i], actual_[static_cast<std::size_t>(region[i])]);
        if (!world(std::move(forced2)).phi) return false;
      }
    }
    return true;
  }

  const CausalModel& m_;
  const Signature& sig_;
  CompiledFormula phi_;
  std::vector<ValueIndex> actual_;
  std::vector<std::vector<VarId>> children_;  // endogenous dependency graph, dep -> users
  std::unordered_map<std::vector<std::uint64_t>, World, KeyHash> cache_;
};

void check_cap(const Signature& sig, const CheckOptions& opt) {
  if (sig.num_endogenous() > opt.cap && !opt.force)
    fail(ErrorKind::CapExceeded,
         "model has " + std::to_string(sig.num_endogenous()) +
             " endogenous variables, over the cap of " + std::to_string(opt.cap) +
             "; the witness search is exponential, force to run anyway");
}

struct ResolvedCandidate {
  std::vector<VarId> vars;
  std::vector<ValueIndex> vals;
  CandidateCause echo;  // explicit values
};

ResolvedCandidate resolve_candidate(const Signature& sig, const CandidateCause& c) {
  if (c.conjuncts.empty()) fail(ErrorKind::InvalidInput, "candidate has no conjuncts");
  ResolvedCandidate r;
  for (const auto& [name, value] : c.conjuncts) {
    VarId id = sig.id_of(name);
    if (sig.is_exogenous(id))
      fail(ErrorKind::InvalidInput, "candidate variable " + name + " is exogenous");
    if (std::find(r.vars.begin(), r.vars.end(), id) != r.vars.end())
      fail(ErrorKind::InvalidInput, "candidate repeats variable " + name);
    ValueIndex vi;
    if (value.empty()) {
      if (!sig.is_boolean_var(id))
        fail(ErrorKind::InvalidInput,
             "candidate " + name + " needs an explicit value: domain is not {0,1}");
      vi = sig.true_index(id);
    } else {
      vi = sig.value_index(id, value);
    }
    r.vars.push_back(id);
    r.vals.push_back(vi);
    r.echo.conjuncts.emplace_back(name, sig.value_name(id, vi));
  }
  return r;
}

Witness make_witness(const Signature& sig, std::span<const ValueIndex> actual,
                     const RawWitness& raw, const ResolvedCandidate& cand) {
  Witness w;
  for (std::size_t i = 0; i < raw.wvars.size(); ++i)
    w.contingency.emplace_back(sig.variable(raw.wvars[i]).name,
                               sig.value_name(raw.wvars[i], raw.wvals[i]));
  for (std::size_t i = 0; i < cand.vars.size(); ++i)
    w.alt_values.emplace_back(sig.variable(cand.vars[i]).name,
                              sig.value_name(cand.vars[i], raw.xprime[i]));
  std::vector<VarId> zs;
  for (VarId v = sig.first_endogenous(); v < sig.num_vars(); ++v)
    if (std::find(raw.wvars.begin(), raw.wvars.end(), v) == raw.wvars.end()) zs.push_back(v);
  std::sort(zs.begin(), zs.end(),
            [&](VarId a, VarId b) { return sig.variable(a).name < sig.variable(b).name; });
  for (VarId v : zs)
    w.z_star.emplace_back(sig.variable(v).name,
                          sig.value_name(v, actual[static_cast<std::size_t>(v)]));
  return w;
}

bool ac1_holds(Engine& eng, const ResolvedCandidate& cand) {
  if (!eng.phi_on_actual()) return false;
  for (std::size_t i = 0; i < cand.vars.size(); ++i)
    if (eng.actual()[static_cast<std::size_t>(cand.vars[i])] != cand.vals[i]) return false;
  return true;
}

}  // namespace

CauseReport check_cause(const CausalModel& model, const Context& context,
                        const CandidateCause& candidate, const CausalFormula& formula,
                        const CheckOptions& options) {
  check_cap(model.signature(), options);
  ResolvedCandidate cand = resolve_candidate(model.signature(), candidate);
  Engine eng(model, context, formula);

  CauseReport rep;
  rep.candidate = cand.echo;
  rep.responsibility = Rational(0);
  if (!ac1_holds(eng, cand)) {
    rep.failed_condition = Condition::AC1;
    return rep;
  }
  auto wit = eng.search(cand.vars, cand.vals, model.signature().num_endogenous());
  if (!wit) {
    rep.failed_condition = Condition::AC2;
    return rep;
  }
  if (cand.vars.size() > 1 && !eng.minimal(cand.vars, cand.vals)) {
    rep.failed_condition = Condition::AC3;
    return rep;
  }
  rep.is_cause = true;
  rep.responsibility = Rational(1, static_cast<std::int64_t>(wit->wvars.size()) + 1);
  rep.witness = make_witness(model.signature(), eng.actual(), *wit, cand);
  return rep;
}

Rational responsibility(const CausalModel& model, const Context& context,
                        const CandidateCause& candidate, const CausalFormula& formula,
                        const CheckOptions& options) {
  return check_cause(model, context, candidate, formula, options).responsibility;
}

std::optional<Rational> responsibility_bounded(const CausalModel& model, const Context& context,
                                               const CandidateCause& candidate,
                                               const CausalFormula& formula, int k_max,
                                               const CheckOptions& options) {
  if (k_max < 0) fail(ErrorKind::InvalidInput, "k_max must be nonnegative");
  check_cap(model.signature(), options);
  ResolvedCandidate cand = resolve_candidate(model.signature(), candidate);
  Engine eng(model, context, formula);

  if (!ac1_holds(eng, cand)) return Rational(0);
  auto wit = eng.search(cand.vars, cand.vals, k_max);
  if (!wit) return std::nullopt;  // responsibility < 1/(k_max+1), possibly 0
  if (cand.vars.size() > 1 && !eng.minimal(cand.vars, cand.vals)) return Rational(0);
  return Rational(1, static_cast<std::int64_t>(wit->wvars.size()) + 1);
}

std::vector<CauseReport> find_causes(const CausalModel& model, const Context& context,
                                     const CausalFormula& formula, int max_conjuncts,
                                     const CheckOptions& options) {
  if (max_conjuncts < 1) fail(ErrorKind::InvalidInput, "max_conjuncts must be at least 1");
  check_cap(model.signature(), options);
  const Signature& sig = model.signature();
  Engine eng(model, context, formula);
  std::vector<CauseReport> out;
  if (!eng.phi_on_actual()) return out;

  const int n = sig.num_endogenous();
  std::vector<VarId> subset;
  auto recurse = [&](auto&& self, VarId next) -> void {
    if (!subset.empty()) {
      ResolvedCandidate cand;
      for (VarId v : subset) {
        cand.vars.push_back(v);
        cand.vals.push_back(eng.actual()[static_cast<std::size_t>(v)]);
        cand.echo.conjuncts.emplace_back(
            sig.variable(v).name,
            sig.value_name(v, eng.actual()[static_cast<std::size_t>(v)]));
      }
      if (auto wit = eng.search(cand.vars, cand.vals, n)) {
        if (cand.vars.size() == 1 || eng.minimal(cand.vars, cand.vals)) {
          CauseReport rep;
          rep.candidate = cand.echo;
          rep.is_cause = true;
          rep.responsibility = Rational(1, static_cast<std::int64_t>(wit->wvars.size()) + 1);
          rep.witness = make_witness(sig, eng.actual(), *wit, cand);
          out.push_back(std::move(rep));
        }
      }
    }
    if (static_cast<int>(subset.size()) >= max_conjuncts) return;
    for (VarId v = next; v < sig.num_vars(); ++v) {
      subset.push_back(v);
      self(self, v + 1);
      subset.pop_back();
    }
  };
  recurse(recurse, sig.first_endogenous());

  std::stable_sort(out.begin(), out.end(), [](const CauseReport& a, const CauseReport& b) {
    if (a.responsibility != b.responsibility) return b.responsibility < a.responsibility;
    return a.candidate.conjuncts < b.candidate.conjuncts;
  });
  return out;
}

void EpistemicState::validate() const {
  if (situations.empty()) fail(ErrorKind::InvalidInput, "epistemic state has no situations");
  Rational sum(0);
  for (const auto& s : situations) {
    if (!s.model) fail(ErrorKind::InvalidInput, "epistemic situation without a model");
    if (s.probability < Rational(0))
      fail(ErrorKind::InvalidInput, "negative probability " + s.probability.str());
    sum = sum + s.probability;
  }
  if (sum != Rational(1))
    fail(ErrorKind::InvalidInput, "probabilities sum to " + sum.str() + ", expected 1");
}

EpistemicState load_epistemic(const std::string& path) {
  json j = read_json_file(path);
  EpistemicState state;
  std::map<std::string, std::shared_ptr<const CausalModel>> loaded;
  try {
    auto dir = std::filesystem::path(path).parent_path();
    for (const auto& s : j.at("situations")) {
      EpistemicState::Situation sit;
      std::string mfile = s.at("model").get<std::string>();
      std::string full = (dir / mfile).lexically_normal().string();
      auto it = loaded.find(full);
      if (it == loaded.end())
        it = loaded.emplace(full, std::make_shared<CausalModel>(load_model(full))).first;
      sit.model = it->second;
      const auto& ctx = s.at("context");
      if (ctx.is_string()) {
        const auto& presets = sit.model->named_contexts();
        auto pit = presets.find(ctx.get<std::string>());
        if (pit == presets.end())
          fail(ErrorKind::InvalidInput,
               "model " + mfile + " has no context named " + ctx.get<std::string>());
        sit.context = pit->second;
      } else {
        for (const auto& [var, val] : ctx.items()) sit.context[var] = val.get<std::string>();
      }
      sit.probability = Rational::parse(s.at("probability").get<std::string>());
      state.situations.push_back(std::move(sit));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, path + ": " + e.what());
  }
  state.validate();
  return state;
}

Rational blame(const EpistemicState& state, const Intervention& setting,
               const CausalFormula& formula, const CheckOptions& options) {
  state.validate();
  if (setting.empty()) fail(ErrorKind::InvalidInput, "blame needs a nonempty setting");

  Rational total(0);
  for (std::size_t i = 0; i < state.situations.size(); ++i) {
    const auto& sit = state.situations[i];
    const Signature& sig = sit.model->signature();

    auto mismatch = [&](const std::string& what) {
      fail(ErrorKind::SignatureMismatch,
           "situation " + std::to_string(i) + ": " + what);
    };
    for (const auto& [var, val] : setting) {
      auto id = sig.find(var);
      if (!id) mismatch("no variable " + var);
      if (sig.is_exogenous(*id)) mismatch("setting targets exogenous variable " + var);
      bool in_domain = false;
      for (const auto& d : sig.variable(*id).domain) in_domain = in_domain || d == val;
      if (!in_domain) mismatch("value " + val + " not in domain of " + var);
    }
    for (const auto& name : formula.event_vars())
      if (!sig.find(name)) mismatch("formula mentions unknown variable " + name);

    // M_{X<-x}: the equations of the set variables become constants.
    std::map<std::string, Equation> funcs = sit.model->functions();
    for (const auto& [var, val] : setting) funcs[var] = Equation::expression(Expr::lit(val));
    CausalModel forced(sig, std::move(funcs), {});

    CandidateCause cand;
    cand.conjuncts.assign(setting.begin(), setting.end());
    Rational dr = responsibility(forced, sit.context, cand, formula, options);
    total = total + sit.probability * dr;
  }
  return total;
}

}  // namespace caver::causal
