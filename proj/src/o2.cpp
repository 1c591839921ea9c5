#include "spindyn/o2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spindyn/errors.hpp"
#include "spindyn/rng.hpp"

namespace spindyn {

void AnnealParamsO2::validate() const {
  if (!(t_f > 0)) throw ValidationError("o2 params: t_f must be > 0");
  if (!(dt > 0 && dt <= t_f)) throw ValidationError("o2 params: need 0 < dt <= t_f");
  if (!(kappa >= 0 && kappa < 1)) throw ValidationError("o2 params: need 0 <= kappa < 1");
  if (!(gamma >= 0)) throw ValidationError("o2 params: gamma must be >= 0");
}

std::size_t AnnealParamsO2::steps() const {
  return static_cast<std::size_t>(std::ceil(t_f / dt - 1e-9));
}

std::vector<double> sample_rotor_angles(std::size_t n, double kappa,
                                        std::uint64_t seed) {
  if (!(kappa >= 0 && kappa < 1))
    throw ValidationError("sample_rotor_angles: need 0 <= kappa < 1");
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i)
    theta[i] = rng_symmetric(seed, Stream::RotorAngle, i, kappa);
  return theta;
}

double o2_potential(const Instance& inst, const std::vector<double>& theta,
                    double s, double h) {
  double v = 0.0;
  for (int i = 0; i < inst.graph.n_vertices; ++i)
    if (inst.graph.active[i]) v -= (1.0 - s) * h * std::cos(theta[std::size_t(i)]);
  for (std::size_t e = 0; e < inst.graph.edges.size(); ++e) {
    const auto [i, j] = inst.graph.edges[e];
    v += s * inst.couplings[e] * std::sin(theta[std::size_t(i)]) *
         std::sin(theta[std::size_t(j)]);
  }
  return v;
}

namespace {

double wrap_angle(double t) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(t, two_pi);
  if (r <= -std::numbers::pi) r = std::numbers::pi;
  return r;
}

// sin/cos of the current angles, refreshed once per drift.
void refresh_trig(const std::vector<double>& theta, std::vector<double>& sin_v,
                  std::vector<double>& cos_v) {
  sin_v.resize(theta.size());
  cos_v.resize(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    sin_v[i] = std::sin(theta[i]);
    cos_v[i] = std::cos(theta[i]);
  }
}

void torque_from_trig(const CouplingTable& table, const std::vector<double>& sin_v,
                      const std::vector<double>& cos_v, double s, double hx,
                      std::vector<double>& out) {
  const std::size_t n = table.size();
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double coupled = 0.0;
    for (const auto& [j, coupling] : table[i])
      coupled += coupling * sin_v[std::size_t(j)];
    out[i] = -hx * sin_v[i] - s * cos_v[i] * coupled;
  }
}

// One velocity-Verlet step with exponential damping factors around the two
// half-kicks. Expects sin_v/cos_v fresh for state.theta; leaves them fresh.
void step_core(const CouplingTable& table, RotorState& state,
               std::vector<double>& sin_v, std::vector<double>& cos_v,
               std::vector<double>& torque, double s, const AnnealParamsO2& params) {
  const double half = 0.5 * params.dt;
  const double damp = std::exp(-params.gamma * half);
  const double hx = (1.0 - s) * params.h;
  torque_from_trig(table, sin_v, cos_v, s, hx, torque);
  for (std::size_t i = 0; i < state.omega.size(); ++i)
    state.omega[i] = (state.omega[i] + half * torque[i]) * damp;
  for (std::size_t i = 0; i < state.theta.size(); ++i)
    state.theta[i] = wrap_angle(state.theta[i] + params.dt * state.omega[i]);
  refresh_trig(state.theta, sin_v, cos_v);
  torque_from_trig(table, sin_v, cos_v, s, hx, torque);
  for (std::size_t i = 0; i < state.omega.size(); ++i)
    state.omega[i] = state.omega[i] * damp + half * torque[i];
}

}  // namespace

std::vector<double> o2_torque(const Instance& inst, const std::vector<double>& theta,
                              double s, double h) {
  if (theta.size() != std::size_t(inst.graph.n_vertices))
    throw ValidationError("o2_torque: angle array length mismatch");
  const CouplingTable table = build_coupling_table(inst);
  std::vector<double> sin_v, cos_v, out;
  refresh_trig(theta, sin_v, cos_v);
  torque_from_trig(table, sin_v, cos_v, s, (1.0 - s) * h, out);
  return out;
}

void o2_step(const Instance& inst, RotorState& state, double s,
             const AnnealParamsO2& params) {
  if (state.theta.size() != std::size_t(inst.graph.n_vertices) ||
      state.omega.size() != state.theta.size())
    throw ValidationError("o2_step: state length mismatch");
  const CouplingTable table = build_coupling_table(inst);
  std::vector<double> sin_v, cos_v, torque;
  refresh_trig(state.theta, sin_v, cos_v);
  step_core(table, state, sin_v, cos_v, torque, s, params);
}

SpinConfig o2_readout(const RotorState& state) {
  SpinConfig cfg;
  cfg.sigma.resize(state.theta.size());
  for (std::size_t i = 0; i < state.theta.size(); ++i)
    cfg.sigma[i] = std::sin(state.theta[i]) < 0.0 ? -1 : 1;
  return cfg;
}

O2Runner::O2Runner(const Instance& inst, const AnnealParamsO2& params,
                   std::uint64_t seed)
    : O2Runner(inst, params,
               sample_rotor_angles(std::size_t(inst.graph.n_vertices), params.kappa,
                                   seed)) {}

O2Runner::O2Runner(const Instance& inst, const AnnealParamsO2& params,
                   std::vector<double> theta0)
    : inst_(&inst), params_(params) {
  params_.validate();
  if (theta0.size() != std::size_t(inst.graph.n_vertices))
    throw ValidationError("o2: initial angle array length mismatch");
  for (int v = 0; v < inst.graph.n_vertices; ++v)
    if (!inst.graph.active[v]) theta0[std::size_t(v)] = 0.0;
  table_ = build_coupling_table(inst);
  state_.theta = std::move(theta0);
  state_.omega.assign(state_.theta.size(), 0.0);
  refresh_trig(state_.theta, sin_cache_, cos_cache_);
  total_ = params_.steps();
}

void O2Runner::step() {
  if (done()) return;
  const double s =
      std::min(1.0, (double(step_) + 0.5) * params_.dt / params_.t_f);
  step_core(table_, state_, sin_cache_, cos_cache_, torque_, s, params_);
  ++step_;
}

SpinConfig run_o2(const Instance& inst, const AnnealParamsO2& params,
                  std::uint64_t seed) {
  O2Runner runner(inst, params, seed);
  while (!runner.done()) runner.step();
  return o2_readout(runner.state());
}

SpinConfig run_o2(const Instance& inst, const AnnealParamsO2& params,
                  std::vector<double> theta0) {
  O2Runner runner(inst, params, std::move(theta0));
  while (!runner.done()) runner.step();
  return o2_readout(runner.state());
}

}  // namespace spindyn
