#include <algorithm>
#include <cstdint>
#include <map>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "caver/errors.hpp"
#include "caver/ltl/kripke.hpp"

namespace caver::ltl {

namespace {

// Core grammar for the tableau: true, atoms, !, &, X, U. Everything else
// desugars into it. Nodes are hash-consed so ids identify subformulas.
struct CoreNode {
  enum Kind { True, Atom, Not, And, Next, Until } kind;
  int a = -1, b = -1;
  std::string name;
};

struct CoreTable {
  std::vector<CoreNode> nodes;
  std::map<std::tuple<int, int, int, std::string>, int> dedup;

  int mk(CoreNode::Kind kind, int a = -1, int b = -1, std::string name = "") {
    if (kind == CoreNode::Not && nodes[static_cast<std::size_t>(a)].kind == CoreNode::Not)
      return nodes[static_cast<std::size_t>(a)].a;  // !!x = x
    auto key = std::make_tuple(static_cast<int>(kind), a, b, name);
    auto it = dedup.find(key);
    if (it != dedup.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    nodes.push_back({kind, a, b, std::move(name)});
    dedup.emplace(std::move(key), id);
    return id;
  }

  int desugar(const LtlFormula& f) {
    using Op = LtlFormula::Op;
    switch (f.op()) {
      case Op::True: return mk(CoreNode::True);
      case Op::False: return mk(CoreNode::Not, mk(CoreNode::True));
      case Op::Atom: return mk(CoreNode::Atom, -1, -1, f.atom_name());
      case Op::Not: return mk(CoreNode::Not, desugar(f.child(0)));
      case Op::And: return mk(CoreNode::And, desugar(f.child(0)), desugar(f.child(1)));
      case Op::Or:
        return mk(CoreNode::Not,
                  mk(CoreNode::And, mk(CoreNode::Not, desugar(f.child(0))),
                     mk(CoreNode::Not, desugar(f.child(1)))));
      case Op::Implies:
        return mk(CoreNode::Not,
                  mk(CoreNode::And, desugar(f.child(0)),
                     mk(CoreNode::Not, desugar(f.child(1)))));
      case Op::Next: return mk(CoreNode::Next, desugar(f.child(0)));
      case Op::Eventually: return mk(CoreNode::Until, mk(CoreNode::True), desugar(f.child(0)));
      case Op::Globally:
        return mk(CoreNode::Not,
                  mk(CoreNode::Until, mk(CoreNode::True),
                     mk(CoreNode::Not, desugar(f.child(0)))));
      case Op::Until: return mk(CoreNode::Until, desugar(f.child(0)), desugar(f.child(1)));
    }
    fail(ErrorKind::InvalidInput, "unreachable formula op");
  }
};

// Tableau states are truth assignments to the core nodes, encoded as bit
// masks. Atoms, X nodes, and unforced U nodes are free; the rest follows.
struct Tableau {
  CoreTable core;
  int root = -1;  // negation of the checked formula
  std::vector<int> atom_ids;
  std::vector<int> next_ids;
  std::vector<int> until_ids;
  std::vector<std::uint64_t> states;
  std::vector<std::optional<std::vector<int>>> succ_cache;

  static bool bit(std::uint64_t m, int id) { return (m >> id) & 1; }

  explicit Tableau(const LtlFormula& formula) {
    root = core.mk(CoreNode::Not, core.desugar(formula));
    int n = static_cast<int>(core.nodes.size());
    if (n > 62) fail(ErrorKind::CapExceeded, "formula too large for the tableau");
    for (int id = 0; id < n; ++id) {
      switch (core.nodes[static_cast<std::size_t>(id)].kind) {
        case CoreNode::Atom: atom_ids.push_back(id); break;
        case CoreNode::Next: next_ids.push_back(id); break;
        case CoreNode::Until: until_ids.push_back(id); break;
        default: break;
      }
    }
    int free_bits =
        static_cast<int>(atom_ids.size() + next_ids.size() + until_ids.size());
    if (free_bits > 20) fail(ErrorKind::CapExceeded, "formula too large for the tableau");

    std::map<std::uint64_t, int> seen;
    for (std::uint64_t combo = 0; combo < (1ull << free_bits); ++combo) {
      std::uint64_t m = 0;
      int next_free = 0;
      auto take = [&]() { return (combo >> next_free++) & 1; };
      for (int id = 0; id < n; ++id) {
        const CoreNode& nd = core.nodes[static_cast<std::size_t>(id)];
        bool v = false;
        switch (nd.kind) {
          case CoreNode::True: v = true; break;
          case CoreNode::Atom: v = take(); break;
          case CoreNode::Not: v = !bit(m, nd.a); break;
          case CoreNode::And: v = bit(m, nd.a) && bit(m, nd.b); break;
          case CoreNode::Next: v = take(); break;
          case CoreNode::Until: {
            bool choice = take();  // consumed either way to keep positions fixed
            v = bit(m, nd.b) || (bit(m, nd.a) && choice);
            break;
          }
        }
        if (v) m |= 1ull << id;
      }
      if (seen.emplace(m, 0).second) states.push_back(m);
    }
    succ_cache.assign(states.size(), std::nullopt);
  }

  std::uint64_t letter(std::uint64_t m) const {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < atom_ids.size(); ++i)
      if (bit(m, atom_ids[i])) out |= 1ull << i;
    return out;
  }

  bool cross_ok(std::uint64_t from, std::uint64_t to) const {
    for (int id : next_ids)
      if (bit(from, id) != bit(to, core.nodes[static_cast<std::size_t>(id)].a)) return false;
    for (int id : until_ids) {
      const CoreNode& nd = core.nodes[static_cast<std::size_t>(id)];
      bool expected = bit(from, nd.b) || (bit(from, nd.a) && bit(to, id));
      if (bit(from, id) != expected) return false;
    }
    return true;
  }

  const std::vector<int>& successors(int state) {
    auto& slot = succ_cache[static_cast<std::size_t>(state)];
    if (!slot) {
      std::vector<int> out;
      for (std::size_t j = 0; j < states.size(); ++j)
        if (cross_ok(states[static_cast<std::size_t>(state)], states[j]))
          out.push_back(static_cast<int>(j));
      slot = std::move(out);
    }
    return *slot;
  }

  // whether the state discharges the until's eventuality
  bool fulfills(std::uint64_t m, int until_id) const {
    const CoreNode& nd = core.nodes[static_cast<std::size_t>(until_id)];
    return !bit(m, until_id) || bit(m, nd.b);
  }

  int counter_step(std::uint64_t m, int i) const {
    int k = static_cast<int>(until_ids.size());
    if (k == 0) return 0;
    return fulfills(m, until_ids[static_cast<std::size_t>(i)]) ? (i + 1) % k : i;
  }

  bool accepting(std::uint64_t m, int i) const {
    if (until_ids.empty()) return true;
    return i == 0 && fulfills(m, until_ids[0]);
  }
};

struct Product {
  const KripkeStructure& k;
  Tableau& tab;
  std::vector<std::uint64_t> kmask;  // formula-atom projection of each state's labels

  std::vector<std::uint64_t> keys;  // encoded (kstate, tableau state, counter)
  std::unordered_map<std::uint64_t, int> ids;
  std::vector<std::optional<std::vector<int>>> succs;
  std::vector<int> initials;

  static std::uint64_t encode(int s, int b, int i) {
    return (static_cast<std::uint64_t>(s) << 40) | (static_cast<std::uint64_t>(b) << 8) |
           static_cast<std::uint64_t>(i);
  }
  int kstate_of(int pid) const { return static_cast<int>(keys[static_cast<std::size_t>(pid)] >> 40); }
  int bstate_of(int pid) const {
    return static_cast<int>((keys[static_cast<std::size_t>(pid)] >> 8) & 0xffffffffull);
  }
  int counter_of(int pid) const { return static_cast<int>(keys[static_cast<std::size_t>(pid)] & 0xff); }

  Product(const KripkeStructure& kripke, Tableau& tableau) : k(kripke), tab(tableau) {
    for (std::size_t s = 0; s < k.states.size(); ++s) {
      std::uint64_t m = 0;
      for (std::size_t i = 0; i < tab.atom_ids.size(); ++i) {
        const std::string& name =
            tab.core.nodes[static_cast<std::size_t>(tab.atom_ids[i])].name;
        int idx = k.atom_index(name);
        if (idx < 0)
          fail(ErrorKind::AlphabetMismatch,
               "formula atom '" + name + "' is not in the structure's alphabet");
        if (k.labels[s][static_cast<std::size_t>(idx)]) m |= 1ull << i;
      }
      kmask.push_back(m);
    }

    for (int s0 : k.initial) {
      for (std::size_t b0 = 0; b0 < tab.states.size(); ++b0) {
        std::uint64_t m0 = tab.states[b0];
        if (!Tableau::bit(m0, tab.root)) continue;
        if (tab.letter(m0) != kmask[static_cast<std::size_t>(s0)]) continue;
        int i1 = tab.counter_step(m0, 0);
        for (int b1 : tab.successors(static_cast<int>(b0))) {
          int pid = intern(s0, b1, i1);
          if (std::find(initials.begin(), initials.end(), pid) == initials.end())
            initials.push_back(pid);
        }
      }
    }
  }

  int intern(int s, int b, int i) {
    std::uint64_t key = encode(s, b, i);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int pid = static_cast<int>(keys.size());
    keys.push_back(key);
    succs.emplace_back();
    ids.emplace(key, pid);
    return pid;
  }

  const std::vector<int>& successors(int pid) {
    if (!succs[static_cast<std::size_t>(pid)]) {
      int s = kstate_of(pid), b = bstate_of(pid), i = counter_of(pid);
      std::uint64_t m = tab.states[static_cast<std::size_t>(b)];
      std::uint64_t want = tab.letter(m);
      int i2 = tab.counter_step(m, i);
      std::vector<int> out;
      for (int s2 : k.succ[static_cast<std::size_t>(s)]) {
        if (kmask[static_cast<std::size_t>(s2)] != want) continue;
        for (int b2 : tab.successors(b)) out.push_back(intern(s2, b2, i2));
      }
      // interning above may grow succs, so index again only now
      succs[static_cast<std::size_t>(pid)] = std::move(out);
    }
    return *succs[static_cast<std::size_t>(pid)];
  }

  bool accepting(int pid) const {
    return tab.accepting(tab.states[static_cast<std::size_t>(bstate_of(pid))],
                         counter_of(pid));
  }
};

// Nested depth-first search for an accepting lasso; both passes iterative.
struct LassoSearch {
  Product& prod;
  std::vector<char> color;  // 0 white, 1 on the blue stack, 2 done
  std::vector<char> red;
  std::vector<int> blue_stack;

  struct Found {
    std::vector<int> stem;  // product ids
    std::vector<int> loop;
  };
  std::optional<Found> found;

  explicit LassoSearch(Product& p) : prod(p) {}

  bool run() {
    for (int init : prod.initials) {
      grow(init);
      blue_dfs(init);
      if (found) return true;
    }
    return false;
  }

  void grow(int pid) {
    if (static_cast<std::size_t>(pid) >= color.size()) {
      color.resize(static_cast<std::size_t>(pid) + 1, 0);
      red.resize(static_cast<std::size_t>(pid) + 1, 0);
    }
  }

  void blue_dfs(int start) {
    if (color[static_cast<std::size_t>(start)] != 0) return;
    std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
    color[static_cast<std::size_t>(start)] = 1;
    blue_stack.push_back(start);
    while (!stack.empty()) {
      auto& [v, child] = stack.back();
      const auto& next = prod.successors(v);
      if (child < next.size()) {
        int w = next[child++];
        grow(w);
        if (color[static_cast<std::size_t>(w)] == 0) {
          color[static_cast<std::size_t>(w)] = 1;
          blue_stack.push_back(w);
          stack.push_back({w, 0});
        }
        continue;
      }
      if (prod.accepting(v) && red_dfs(v)) return;
      color[static_cast<std::size_t>(v)] = 2;
      blue_stack.pop_back();
      stack.pop_back();
    }
  }

  // looks for a path from the accepting seed back to the blue stack
  bool red_dfs(int seed) {
    std::unordered_map<int, int> parent;  // first reacher
    std::vector<int> stack{seed};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : prod.successors(v)) {
        grow(w);
        if (color[static_cast<std::size_t>(w)] == 1) {
          build(seed, v, w, parent);
          return true;
        }
        if (!red[static_cast<std::size_t>(w)]) {
          red[static_cast<std::size_t>(w)] = 1;
          parent[w] = v;
          stack.push_back(w);
        }
      }
    }
    return false;
  }

  void build(int seed, int last, int target, const std::unordered_map<int, int>& parent) {
    // blue stack: init ... target ... seed; red path: seed ... last -> target
    auto at = std::find(blue_stack.begin(), blue_stack.end(), target);
    Found f;
    f.stem.assign(blue_stack.begin(), at);
    f.loop.assign(at, blue_stack.end());
    std::vector<int> back;
    for (int v = last; v != seed; v = parent.at(v)) back.push_back(v);
    f.loop.insert(f.loop.end(), back.rbegin(), back.rend());
    found = std::move(f);
  }
};

}  // namespace

struct BuchiChecker::Impl {
  LtlFormula formula;
  explicit Impl(const LtlFormula& f) : formula(f) {}
};

BuchiChecker::BuchiChecker(const LtlFormula& formula) : impl_(new Impl(formula)) {
  Tableau probe(formula);  // surfaces size errors at construction time
}
BuchiChecker::~BuchiChecker() = default;
BuchiChecker::BuchiChecker(BuchiChecker&&) noexcept = default;
BuchiChecker& BuchiChecker::operator=(BuchiChecker&&) noexcept = default;

const LtlFormula& BuchiChecker::formula() const { return impl_->formula; }

Verdict BuchiChecker::check(const KripkeStructure& k) const {
  k.validate();
  for (const auto& a : impl_->formula.atoms())
    if (k.atom_index(a) < 0)
      fail(ErrorKind::AlphabetMismatch,
           "formula atom '" + a + "' is not in the structure's alphabet");

  Tableau tab(impl_->formula);
  Product prod(k, tab);
  LassoSearch search(prod);
  if (!search.run()) return Verdict{true, std::nullopt};

  Trace trace;
  trace.alphabet = k.atoms;
  auto push_row = [&](int pid) {
    trace.cycles.push_back(k.labels[static_cast<std::size_t>(prod.kstate_of(pid))]);
  };
  for (int pid : search.found->stem) push_row(pid);
  trace.loop_start = static_cast<int>(trace.cycles.size());
  for (int pid : search.found->loop) push_row(pid);
  trace.validate();
  return Verdict{false, std::move(trace)};
}

Verdict check_structure(const KripkeStructure& k, const LtlFormula& formula) {
  return BuchiChecker(formula).check(k);
}

}  // namespace caver::ltl
