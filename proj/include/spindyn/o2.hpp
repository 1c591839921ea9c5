#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spindyn/instance.hpp"

namespace spindyn {

// Planar-rotor state: spin i is the unit vector (cos theta_i, 0, sin theta_i)
// in the x-z plane, with angular velocity omega_i.
struct RotorState {
  std::vector<double> theta;
  std::vector<double> omega;
};

struct AnnealParamsO2 {
  double h = 1.0;
  double t_f = 300.0;
  double dt = 0.01;
  double gamma = 0.1;  // viscous damping
  double kappa = 0.1;  // initial-angle amplitude (radians)

  void validate() const;
  std::size_t steps() const;
};

// Initial angles uniform on (-kappa, kappa), counter-generated.
std::vector<double> sample_rotor_angles(std::size_t n, double kappa,
                                        std::uint64_t seed);

// V(theta, s) = -(1-s) h sum_i cos theta_i + s sum_(ij) J_ij sin theta_i sin theta_j.
double o2_potential(const Instance& inst, const std::vector<double>& theta,
                    double s, double h);

// tau_i = -dV/dtheta_i = -(1-s) h sin theta_i - s cos theta_i sum_j J_ij sin theta_j.
std::vector<double> o2_torque(const Instance& inst, const std::vector<double>& theta,
                              double s, double h);

// One velocity-Verlet step at fixed schedule progress s, with the viscous
// damping applied as an exact exponential factor on each half step. Reduces
// to plain velocity Verlet at gamma = 0. Angles are wrapped to (-pi, pi]
// after the step.
void o2_step(const Instance& inst, RotorState& state, double s,
             const AnnealParamsO2& params);

// sigma_i = sign(sin theta_i), +1 at exactly zero.
SpinConfig o2_readout(const RotorState& state);

class O2Runner {
 public:
  O2Runner(const Instance& inst, const AnnealParamsO2& params, std::uint64_t seed);
  O2Runner(const Instance& inst, const AnnealParamsO2& params,
           std::vector<double> theta0);

  bool done() const { return step_ >= total_; }
  void step();
  const RotorState& state() const { return state_; }
  std::size_t total_steps() const { return total_; }

 private:
  const Instance* inst_;
  AnnealParamsO2 params_;
  CouplingTable table_;
  RotorState state_;
  std::vector<double> sin_cache_, cos_cache_, torque_;
  std::size_t step_ = 0;
  std::size_t total_ = 0;
};

// Newtonian anneal with unit inertia from rest (omega = 0); randomness enters
// through the initial angles only. Returns the readout configuration.
SpinConfig run_o2(const Instance& inst, const AnnealParamsO2& params,
                  std::uint64_t seed);
SpinConfig run_o2(const Instance& inst, const AnnealParamsO2& params,
                  std::vector<double> theta0);

}  // namespace spindyn
