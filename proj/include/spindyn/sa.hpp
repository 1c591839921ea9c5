#pragma once

#include <cstdint>
#include <functional>

#include "spindyn/instance.hpp"

namespace spindyn {

struct SaSchedule {
  double beta_start = 0.1;
  double beta_end = 3.0;
  int sweeps = 1000;

  void validate() const;
};

// Per-proposal trace hook for tests and diagnostics.
struct SaFlip {
  int sweep;
  int vertex;
  std::int64_t delta_e;
  bool accepted;
};
using SaObserver = std::function<void(const SaFlip&, const SpinConfig&)>;

// Metropolis single-spin-flip annealing. Starts from a uniform random
// configuration; beta interpolates linearly from beta_start to beta_end over
// the sweeps; one sweep proposes each active spin once in index order; a flip
// is accepted with probability min(1, exp(-beta * dE)) with dE computed
// incrementally from neighbor sums. Acceptance draws are addressed by
// (sweep, vertex), so the trajectory is a pure function of
// (instance, schedule, seed). Inactive vertices stay at +1.
SpinConfig run_sa(const Instance& inst, const SaSchedule& schedule,
                  std::uint64_t seed, const SaObserver* observer = nullptr);

}  // namespace spindyn
