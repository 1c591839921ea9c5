#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spindyn/graph.hpp"

namespace spindyn {

// Ising configuration, one entry per vertex, each exactly -1 or +1.
struct SpinConfig {
  std::vector<std::int8_t> sigma;

  std::size_t size() const { return sigma.size(); }
  friend bool operator==(const SpinConfig& a, const SpinConfig& b) {
    return a.sigma == b.sigma;
  }
};

// A spin-glass problem: a graph plus one coupling J in {-1, +1} per edge,
// stored aligned with graph.edges.
struct Instance {
  Graph graph;
  std::vector<std::int8_t> couplings;
  std::string id;
  std::uint64_t seed = 0;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.graph == b.graph && a.couplings == b.couplings && a.id == b.id &&
           a.seed == b.seed;
  }
};

// Per-vertex list of (neighbor, coupling) pairs, in adjacency order. Used by
// every solver's inner loop.
using CouplingTable = std::vector<std::vector<std::pair<int, std::int8_t>>>;
CouplingTable build_coupling_table(const Instance& inst);

// Assigns each active edge J = +-1 with probability 1/2 from the counter
// generator keyed by (seed, edge index): same seed gives an identical
// instance on every platform and in any call order.
Instance gen_instance(const Graph& graph, std::uint64_t seed, std::string id = {});

// E(sigma) = sum over edges of J_ij sigma_i sigma_j, minimized by convention.
std::int64_t energy(const Instance& inst, const SpinConfig& config);

// Plain-text edge list: header "N M", then M lines "i j J" with 0-based
// indices. '#' comment lines are tolerated on read; "# id:" and "# seed:"
// comments round-trip those fields.
void write_instance(const Instance& inst, std::ostream& out);
void write_instance_file(const Instance& inst, const std::string& path);
Instance read_instance(std::istream& in, std::string fallback_id = {});
Instance read_instance_file(const std::string& path);

// Canonical serialized form, used for content hashes.
std::string instance_text(const Instance& inst);

}  // namespace spindyn
