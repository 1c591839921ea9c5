#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spindyn/instance.hpp"
#include "spindyn/vec3.hpp"

namespace spindyn {

// State of the O(3) model: one classical unit vector per vertex.
struct SpinStateO3 {
  std::vector<Vec3> m;
};

struct AnnealParamsO3 {
  double h = 1.0;       // transverse field strength
  double t_f = 1000.0;  // total anneal time
  double dt = 0.02;     // integration step
  double alpha = 0.0;   // damping coefficient
  double kappa = 0.1;   // initial kick amplitude

  void validate() const;
  std::size_t steps() const;
};

// Random initial perturbations: delta_i, eta_i independent uniform on
// (-kappa, kappa), drawn from the counter generator.
struct KickSample {
  std::vector<double> delta;
  std::vector<double> eta;
};

KickSample sample_kicks(std::size_t n, double kappa, std::uint64_t seed);

// M_i = (-sqrt(1 - delta_i^2 - eta_i^2), delta_i, eta_i); unit norm by
// construction. Requires kappa < 1/sqrt(2) so the radicand stays positive.
SpinStateO3 kick_state(const KickSample& kicks);
SpinStateO3 sample_kick_state(std::size_t n, double kappa, std::uint64_t seed);

// H_i = (1-s) h e_x - s (sum_j J_ij Mz_j) e_z, summed over active neighbors.
std::vector<Vec3> local_field(const Instance& inst, const SpinStateO3& state,
                              double s, double h);

// Field actually integrated by the annealing sweep. Identical to local_field
// except the coupling term enters along +z: paired with the (-1, 0, 0)
// initial state, this is the sign for which the modes that grow during the
// sweep lower the coupling energy sum_ij J_ij Mz_i Mz_j (with the opposite
// pairing they raise it). See README, "Model conventions".
std::vector<Vec3> sweep_field(const Instance& inst, const SpinStateO3& state,
                              double s, double h);

// Damping: H -> H + alpha (H x M).
Vec3 apply_damping(const Vec3& field, const Vec3& m, double alpha);

// Rotates each spin exactly about its field axis by |H_i| * dt — the exact
// solution of dM/dt = H x M for a frozen field. Spins with |H_i| < 1e-12 are
// left unchanged. Preserves |M_i| = 1 to machine precision.
void step_rotate(SpinStateO3& state, const std::vector<Vec3>& fields, double dt);

// One sweep step at fixed schedule progress s: sweep field, damping, rotation.
void sweep_step(const Instance& inst, SpinStateO3& state, double s,
                const AnnealParamsO3& params);

// sigma_i = +1 if Mz_i > 0, -1 if Mz_i < 0, +1 at exactly zero.
SpinConfig readout(const SpinStateO3& state);

// Step-by-step driver. The schedule progress is evaluated at each step's
// midpoint, s = (m + 0.5) dt / t_f, clamped to 1. Inactive vertices start at
// exactly (-1, 0, 0) with no kick and never move.
class O3Runner {
 public:
  O3Runner(const Instance& inst, const AnnealParamsO3& params, std::uint64_t seed);
  O3Runner(const Instance& inst, const AnnealParamsO3& params, KickSample kicks);

  bool done() const { return step_ >= total_; }
  void step();
  const SpinStateO3& state() const { return state_; }
  std::size_t steps_done() const { return step_; }
  std::size_t total_steps() const { return total_; }

 private:
  const Instance* inst_;
  AnnealParamsO3 params_;
  CouplingTable table_;
  SpinStateO3 state_;
  std::vector<Vec3> fields_;
  std::size_t step_ = 0;
  std::size_t total_ = 0;
};

// Full anneal; returns the final state (apply readout() for the Ising
// configuration). Pure function of its arguments.
SpinStateO3 run_o3(const Instance& inst, const AnnealParamsO3& params,
                   std::uint64_t seed);
SpinStateO3 run_o3(const Instance& inst, const AnnealParamsO3& params,
                   KickSample kicks);

}  // namespace spindyn
