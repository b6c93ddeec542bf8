#pragma once

#include <cstdint>
#include <vector>

#include "caver/rational.hpp"
#include "caver/ste/circuit.hpp"

namespace caver::ste {

/// Random combinational DAG: INPUT nodes i0.., then gate nodes g0.. drawing
/// operands uniformly from earlier nodes; the last gate is the sole output.
/// Under the all-X assignment every node is X, so the refinement target is
/// never trivial.
TernaryCircuit random_circuit(std::uint64_t seed, int n_inputs, int n_gates);

struct BenchRow {
  std::uint64_t seed = 0;  // circuit seed; also reused by the random strategy
  int responsibility = 0;  // instantiation counts per strategy
  int random = 0;
  int topo = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  Rational mean_responsibility, mean_random, mean_topo;
};

/// Refines `count` random circuits from per-row seeds derived from `seed`
/// under every strategy, all on the all-X assignment.
BenchResult run_bench(std::uint64_t seed, int count, int n_inputs = 8, int n_gates = 16);

}  // namespace caver::ste
