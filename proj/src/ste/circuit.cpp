#include "caver/ste/circuit.hpp"

#include <algorithm>
#include <set>

#include "caver/errors.hpp"

namespace caver::ste {

char to_char(Ternary v) {
  switch (v) {
    case Ternary::Zero: return '0';
    case Ternary::One: return '1';
    case Ternary::X: return 'X';
  }
  return '?';
}

Ternary ternary_from(std::string_view text) {
  if (text == "0") return Ternary::Zero;
  if (text == "1") return Ternary::One;
  if (text == "X" || text == "x") return Ternary::X;
  fail(ErrorKind::InvalidInput, "ternary value must be 0, 1 or X, got '" + std::string(text) + "'");
}

const char* to_string(GateType t) {
  switch (t) {
    case GateType::Input: return "INPUT";
    case GateType::And: return "AND";
    case GateType::Or: return "OR";
    case GateType::Not: return "NOT";
    case GateType::Buf: return "BUF";
    case GateType::Xor: return "XOR";
    case GateType::Mux: return "MUX";
    case GateType::Latch: return "LATCH";
  }
  return "?";
}

GateType gate_type_from(std::string_view text) {
  if (text == "INPUT") return GateType::Input;
  if (text == "AND") return GateType::And;
  if (text == "OR") return GateType::Or;
  if (text == "NOT") return GateType::Not;
  if (text == "BUF") return GateType::Buf;
  if (text == "XOR") return GateType::Xor;
  if (text == "MUX") return GateType::Mux;
  if (text == "LATCH") return GateType::Latch;
  fail(ErrorKind::InvalidInput, "unknown gate type '" + std::string(text) + "'");
}

namespace {

// -1 means any arity of at least two
int required_arity(GateType t) {
  switch (t) {
    case GateType::Input: return 0;
    case GateType::Not:
    case GateType::Buf:
    case GateType::Latch: return 1;
    case GateType::Xor: return 2;
    case GateType::Mux: return 3;
    case GateType::And:
    case GateType::Or: return -1;
  }
  return 0;
}

}  // namespace

void TernaryCircuit::validate() const {
  std::set<std::string> seen;
  int n = static_cast<int>(nodes.size());
  for (int i = 0; i < n; ++i) {
    const Gate& g = nodes[static_cast<std::size_t>(i)];
    if (g.name.empty()) fail(ErrorKind::InvalidModel, "node " + std::to_string(i) + " has an empty name");
    if (!seen.insert(g.name).second)
      fail(ErrorKind::InvalidModel, "duplicate node name '" + g.name + "'");
    int want = required_arity(g.type);
    int got = static_cast<int>(g.inputs.size());
    if (want >= 0 ? got != want : got < 2)
      fail(ErrorKind::InvalidModel, std::string(to_string(g.type)) + " node '" + g.name +
                                        "' takes " + (want >= 0 ? std::to_string(want) : "2+") +
                                        " inputs, got " + std::to_string(got));
    for (int ref : g.inputs) {
      if (ref < 0 || ref >= n)
        fail(ErrorKind::InvalidModel, "node '" + g.name + "' references a node that does not exist");
      // same-cycle reads must go backward; only a latch reads the previous
      // cycle and may point anywhere
      if (g.type != GateType::Latch && ref >= i)
        fail(ErrorKind::InvalidModel,
             "node '" + g.name + "' references '" +
                 nodes[static_cast<std::size_t>(ref)].name + "' before it is defined");
    }
  }
  std::set<int> outs;
  for (int o : outputs) {
    if (o < 0 || o >= n) fail(ErrorKind::InvalidModel, "output index out of range");
    if (!outs.insert(o).second)
      fail(ErrorKind::InvalidModel,
           "duplicate output '" + nodes[static_cast<std::size_t>(o)].name + "'");
  }
}

bool TernaryCircuit::has_latches() const {
  return std::any_of(nodes.begin(), nodes.end(),
                     [](const Gate& g) { return g.type == GateType::Latch; });
}

int TernaryCircuit::node_index(std::string_view name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<Ternary> ternary_eval(const TernaryCircuit& c, const TernaryAssignment& a) {
  c.validate();
  for (const auto& [name, value] : a) {
    int idx = c.node_index(name);
    if (idx < 0 || c.nodes[static_cast<std::size_t>(idx)].type != GateType::Input)
      fail(ErrorKind::InvalidInput, "assignment names '" + name + "', which is not an INPUT node");
  }

  std::vector<Ternary> val(c.nodes.size(), Ternary::X);
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    if (c.nodes[i].type != GateType::Input) continue;
    auto it = a.find(c.nodes[i].name);
    val[i] = it == a.end() ? Ternary::X : it->second;
  }
  eval_preset(c, val);
  return val;
}

void eval_preset(const TernaryCircuit& c, std::vector<Ternary>& val) {
  for (std::size_t i = 0; i < c.nodes.size(); ++i) {
    const Gate& g = c.nodes[i];
    auto in = [&](int k) { return val[static_cast<std::size_t>(g.inputs[static_cast<std::size_t>(k)])]; };
    switch (g.type) {
      case GateType::Input:
        break;
      case GateType::And: {
        Ternary v = Ternary::One;
        for (std::size_t k = 0; k < g.inputs.size(); ++k) {
          Ternary x = in(static_cast<int>(k));
          if (x == Ternary::Zero) v = Ternary::Zero;
          else if (x == Ternary::X && v == Ternary::One) v = Ternary::X;
        }
        val[i] = v;
        break;
      }
      case GateType::Or: {
        Ternary v = Ternary::Zero;
        for (std::size_t k = 0; k < g.inputs.size(); ++k) {
          Ternary x = in(static_cast<int>(k));
          if (x == Ternary::One) v = Ternary::One;
          else if (x == Ternary::X && v == Ternary::Zero) v = Ternary::X;
        }
        val[i] = v;
        break;
      }
      case GateType::Not:
        val[i] = in(0) == Ternary::X ? Ternary::X
                 : in(0) == Ternary::Zero ? Ternary::One
                                          : Ternary::Zero;
        break;
      case GateType::Buf:
        val[i] = in(0);
        break;
      case GateType::Xor:
        val[i] = in(0) == Ternary::X || in(1) == Ternary::X ? Ternary::X
                 : in(0) != in(1) ? Ternary::One
                                  : Ternary::Zero;
        break;
      case GateType::Mux: {
        Ternary s = in(0), d0 = in(1), d1 = in(2);
        if (s == Ternary::Zero) val[i] = d0;
        else if (s == Ternary::One) val[i] = d1;
        else val[i] = (d0 == d1 && d0 != Ternary::X) ? d0 : Ternary::X;
        break;
      }
      case GateType::Latch:
        fail(ErrorKind::InvalidModel,
             "circuit contains latch '" + g.name + "'; unroll it to a time bound first");
    }
  }
}

TernaryCircuit unroll(const TernaryCircuit& c, int bound) {
  c.validate();
  if (bound < 1) fail(ErrorKind::InvalidInput, "unroll bound must be at least 1");

  auto timed = [&](int node, int t) {
    return c.nodes[static_cast<std::size_t>(node)].name + "#" + std::to_string(t);
  };
  int n = static_cast<int>(c.nodes.size());
  auto slot = [&](int node, int t) { return t * n + node; };

  TernaryCircuit out;
  for (int t = 0; t < bound; ++t)
    for (int i = 0; i < n; ++i) {
      const Gate& g = c.nodes[static_cast<std::size_t>(i)];
      Gate copy;
      copy.name = timed(i, t);
      if (g.type == GateType::Latch) {
        if (t == 0) {
          copy.type = GateType::Input;  // unconstrained initial state
        } else {
          copy.type = GateType::Buf;
          copy.inputs.push_back(slot(g.inputs[0], t - 1));
        }
      } else {
        copy.type = g.type;
        for (int ref : g.inputs) copy.inputs.push_back(slot(ref, t));
      }
      out.nodes.push_back(std::move(copy));
    }
  for (int o : c.outputs) out.outputs.push_back(slot(o, bound - 1));
  out.validate();
  return out;
}

NetlistFile netlist_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::InvalidInput, "netlist file must be a JSON object");
  for (const char* key : {"nodes", "outputs"})
    if (!j.contains(key))
      fail(ErrorKind::InvalidInput, std::string("netlist file lacks \"") + key + "\"");

  NetlistFile f;
  try {
    for (const auto& nj : j.at("nodes")) {
      Gate g;
      g.name = nj.at("name").get<std::string>();
      g.type = gate_type_from(nj.at("type").get<std::string>());
      if (nj.contains("inputs"))
        for (const auto& r : nj.at("inputs"))
          g.inputs.push_back(f.circuit.node_index(r.get<std::string>()));
      f.circuit.nodes.push_back(std::move(g));
    }
    // second pass resolves forward references (legal only for latch data,
    // which validate() enforces)
    std::size_t node_i = 0;
    for (const auto& nj : j.at("nodes")) {
      Gate& g = f.circuit.nodes[node_i++];
      if (!nj.contains("inputs")) continue;
      std::size_t k = 0;
      for (const auto& r : nj.at("inputs")) {
        if (g.inputs[k] < 0) {
          int idx = f.circuit.node_index(r.get<std::string>());
          if (idx < 0)
            fail(ErrorKind::InvalidInput,
                 "node '" + g.name + "' references unknown node '" + r.get<std::string>() + "'");
          g.inputs[k] = idx;
        }
        ++k;
      }
    }
    for (const auto& o : j.at("outputs")) {
      int idx = f.circuit.node_index(o.get<std::string>());
      if (idx < 0)
        fail(ErrorKind::InvalidInput, "unknown output node '" + o.get<std::string>() + "'");
      f.circuit.outputs.push_back(idx);
    }
    if (j.contains("assignment")) {
      const json& a = j.at("assignment");
      if (!a.is_object()) fail(ErrorKind::InvalidInput, "\"assignment\" must be an object");
      for (const auto& [name, v] : a.items())
        f.assignment[name] = ternary_from(v.get<std::string>());
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("malformed netlist file: ") + e.what());
  }
  f.circuit.validate();
  for (const auto& [name, value] : f.assignment) {
    int idx = f.circuit.node_index(name);
    if (idx < 0 || f.circuit.nodes[static_cast<std::size_t>(idx)].type != GateType::Input)
      fail(ErrorKind::InvalidInput, "assignment names '" + name + "', which is not an INPUT node");
  }
  return f;
}

json netlist_to_json(const NetlistFile& f) {
  json nodes = json::array();
  for (const Gate& g : f.circuit.nodes) {
    json nj;
    nj["name"] = g.name;
    nj["type"] = to_string(g.type);
    if (!g.inputs.empty()) {
      json refs = json::array();
      for (int r : g.inputs) refs.push_back(f.circuit.nodes[static_cast<std::size_t>(r)].name);
      nj["inputs"] = std::move(refs);
    }
    nodes.push_back(std::move(nj));
  }
  json outs = json::array();
  for (int o : f.circuit.outputs) outs.push_back(f.circuit.nodes[static_cast<std::size_t>(o)].name);
  json j;
  j["nodes"] = std::move(nodes);
  j["outputs"] = std::move(outs);
  if (!f.assignment.empty()) {
    json a = json::object();
    for (const auto& [name, v] : f.assignment) a[name] = std::string(1, to_char(v));
    j["assignment"] = std::move(a);
  }
  return j;
}

NetlistFile load_netlist(const std::string& path) {
  return netlist_from_json(causal::read_json_file(path));
}

}  // namespace caver::ste
