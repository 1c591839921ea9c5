#include "spindyn/sa.hpp"

#include <cmath>

#include "spindyn/errors.hpp"
#include "spindyn/rng.hpp"

namespace spindyn {

void SaSchedule::validate() const {
  if (!(beta_start >= 0)) throw ValidationError("sa schedule: beta_start must be >= 0");
  if (!(beta_end >= beta_start))
    throw ValidationError("sa schedule: beta_end must be >= beta_start");
  if (sweeps < 1) throw ValidationError("sa schedule: sweeps must be >= 1");
}

SpinConfig run_sa(const Instance& inst, const SaSchedule& schedule,
                  std::uint64_t seed, const SaObserver* observer) {
  schedule.validate();
  const CouplingTable table = build_coupling_table(inst);
  const int n = inst.graph.n_vertices;

  SpinConfig cfg;
  cfg.sigma.assign(std::size_t(n), 1);
  std::vector<int> order;
  for (int v = 0; v < n; ++v) {
    if (!inst.graph.active[v]) continue;
    cfg.sigma[std::size_t(v)] = (rng_u64(seed, Stream::SaInit, std::uint64_t(v)) & 1u) ? 1 : -1;
    order.push_back(v);
  }

  const double span = schedule.beta_end - schedule.beta_start;
  for (int sweep = 0; sweep < schedule.sweeps; ++sweep) {
    const double beta =
        schedule.sweeps > 1
            ? schedule.beta_start + span * double(sweep) / double(schedule.sweeps - 1)
            : schedule.beta_start;
    for (int v : order) {
      std::int64_t local = 0;
      for (const auto& [j, coupling] : table[v]) local += coupling * cfg.sigma[std::size_t(j)];
      const std::int64_t delta_e = -2 * std::int64_t(cfg.sigma[std::size_t(v)]) * local;
      bool accepted = delta_e <= 0;
      if (!accepted) {
        // Acceptance draws are addressed by (sweep, vertex), not consumed
        // sequentially, so skipped draws cannot desynchronize anything.
        const double u = rng_open01(seed, Stream::SaAccept,
                                    std::uint64_t(sweep) * std::uint64_t(n) +
                                        std::uint64_t(v));
        accepted = u < std::exp(-beta * double(delta_e));
      }
      if (accepted) cfg.sigma[std::size_t(v)] = -cfg.sigma[std::size_t(v)];
      if (observer && *observer) (*observer)({sweep, v, delta_e, accepted}, cfg);
    }
  }
  return cfg;
}

}  // namespace spindyn
