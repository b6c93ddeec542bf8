#include "caver/ste/bench.hpp"

#include <limits>
#include <random>
#include <string>

#include "caver/errors.hpp"
#include "caver/ste/refine.hpp"

namespace caver::ste {

namespace {

std::size_t below(std::mt19937_64& rng, std::size_t n) {
  std::uint64_t span = std::numeric_limits<std::uint64_t>::max();
  span -= span % n;
  std::uint64_t r;
  do r = rng(); while (r >= span);
  return static_cast<std::size_t>(r % n);
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 round
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

TernaryCircuit random_circuit(std::uint64_t seed, int n_inputs, int n_gates) {
  if (n_inputs < 1 || n_gates < 1)
    fail(ErrorKind::InvalidInput, "random circuit needs at least one input and one gate");
  std::mt19937_64 rng(seed);
  TernaryCircuit c;
  for (int i = 0; i < n_inputs; ++i)
    c.nodes.push_back({"i" + std::to_string(i), GateType::Input, {}});
  for (int g = 0; g < n_gates; ++g) {
    std::size_t pool = c.nodes.size();
    auto operand = [&] { return static_cast<int>(below(rng, pool)); };
    Gate gate;
    gate.name = "g" + std::to_string(g);
    switch (below(rng, 6)) {
      case 0:
      case 1: gate.type = GateType::And; break;
      case 2:
      case 3: gate.type = GateType::Or; break;
      case 4: gate.type = below(rng, 2) ? GateType::Xor : GateType::Mux; break;
      default: gate.type = GateType::Not; break;
    }
    int arity = gate.type == GateType::Not ? 1
                : gate.type == GateType::Mux ? 3
                : gate.type == GateType::Xor ? 2
                                             : 2 + static_cast<int>(below(rng, 2));
    for (int k = 0; k < arity; ++k) gate.inputs.push_back(operand());
    c.nodes.push_back(std::move(gate));
  }
  c.outputs.push_back(static_cast<int>(c.nodes.size()) - 1);
  c.validate();
  return c;
}

BenchResult run_bench(std::uint64_t seed, int count, int n_inputs, int n_gates) {
  if (count < 1) fail(ErrorKind::InvalidInput, "benchmark needs at least one circuit");
  BenchResult result;
  std::int64_t sums[3] = {0, 0, 0};
  for (int k = 0; k < count; ++k) {
    BenchRow row;
    row.seed = mix(seed, static_cast<std::uint64_t>(k));
    TernaryCircuit c = random_circuit(row.seed, n_inputs, n_gates);
    std::string target = c.nodes[static_cast<std::size_t>(c.outputs[0])].name;

    RefineOptions options;
    options.strategy = Strategy::Responsibility;
    row.responsibility = refine(c, {}, target, options).instantiations;
    options.strategy = Strategy::Random;
    options.seed = row.seed;
    row.random = refine(c, {}, target, options).instantiations;
    options.strategy = Strategy::Topo;
    row.topo = refine(c, {}, target, options).instantiations;

    sums[0] += row.responsibility;
    sums[1] += row.random;
    sums[2] += row.topo;
    result.rows.push_back(row);
  }
  result.mean_responsibility = Rational(sums[0], count);
  result.mean_random = Rational(sums[1], count);
  result.mean_topo = Rational(sums[2], count);
  return result;
}

}  // namespace caver::ste
