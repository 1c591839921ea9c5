#pragma once

#include <cstdint>

#include "spindyn/instance.hpp"

namespace spindyn {

struct GroundTruth {
  enum class Method { BruteForce, ChimeraDP };

  std::int64_t energy = 0;
  SpinConfig witness;
  Method method = Method::BruteForce;
};

const char* method_name(GroundTruth::Method m);

// Exhaustive search over 2^(N-1) configurations (one spin pinned by global
// flip symmetry), refused above 30 active vertices. Returns the minimum
// energy and the lexicographically smallest optimal configuration subject to
// sigma_0 = +1, with -1 ordered before +1. Inactive and isolated vertices are
// pinned to +1.
GroundTruth brute_force_ground(const Instance& inst);

// Exact minimum for chimera-structured instances via a column sweep. The
// boundary state holds the current column's horizontal-shore spins across all
// rows; cells are absorbed row by row, each enumerating its 2^(2*shore)
// configurations. Requires rows * shore <= 20 and an instance graph equal to
// build_chimera(spec). Witness recovered by backtracking; masked vertices are
// fixed to +1.
GroundTruth chimera_dp_ground(const Instance& inst, const ChimeraSpec& spec);

}  // namespace spindyn
