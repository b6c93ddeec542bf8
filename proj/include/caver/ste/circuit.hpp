#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "caver/causal/json_io.hpp"

namespace caver::ste {

using causal::json;

enum class Ternary : unsigned char { Zero, One, X };

char to_char(Ternary v);
Ternary ternary_from(std::string_view text);  // "0", "1" or "X"

enum class GateType { Input, And, Or, Not, Buf, Xor, Mux, Latch };

const char* to_string(GateType t);
GateType gate_type_from(std::string_view text);

struct Gate {
  std::string name;
  GateType type;
  std::vector<int> inputs;  // node indices; MUX order is select, d0, d1
};

/// Gate-level netlist. Combinational references must point at earlier nodes,
/// so declaration order is a topological order; only a LATCH may reference a
/// later node (it reads the previous cycle). Latches must be unrolled away
/// before evaluation.
struct TernaryCircuit {
  std::vector<Gate> nodes;
  std::vector<int> outputs;  // node indices

  void validate() const;
  bool has_latches() const;
  int node_index(std::string_view name) const;  // -1 when absent
};

/// Partial maps are read as X for the missing inputs; keys must name INPUT
/// nodes.
using TernaryAssignment = std::map<std::string, Ternary>;

/// Every node's monotone ternary value, indexed like c.nodes. Controlling
/// values decide a gate regardless of X operands: AND(0,X)=0, OR(1,X)=1,
/// MUX with an X select is X unless both data values agree.
std::vector<Ternary> ternary_eval(const TernaryCircuit& c, const TernaryAssignment& a);

/// Low-level evaluator behind ternary_eval: INPUT slots of `val` are preset
/// by the caller, every other slot is recomputed in declaration order. No
/// validation; `val` must hold one slot per node.
void eval_preset(const TernaryCircuit& c, std::vector<Ternary>& val);

/// Time-indexed copies n#0 .. n#(bound-1). A latch's cycle-t copy buffers its
/// data input's cycle-(t-1) value and its cycle-0 copy becomes a fresh INPUT;
/// other nodes copy within their cycle. Outputs are the last-cycle copies.
TernaryCircuit unroll(const TernaryCircuit& c, int bound);

/// {"nodes": [{"name": .., "type": .., "inputs": [..]}, ..],
///  "outputs": [..], "assignment": {input: "0"|"1"|"X"}}
/// "inputs" may be omitted for INPUT nodes; "assignment" defaults to all-X.
struct NetlistFile {
  TernaryCircuit circuit;
  TernaryAssignment assignment;
};

NetlistFile netlist_from_json(const json& j);
json netlist_to_json(const NetlistFile& f);
NetlistFile load_netlist(const std::string& path);

}  // namespace caver::ste
