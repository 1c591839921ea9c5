#include "spindyn/o3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spindyn/errors.hpp"
#include "spindyn/rng.hpp"

namespace spindyn {

void AnnealParamsO3::validate() const {
  if (!(t_f > 0)) throw ValidationError("o3 params: t_f must be > 0");
  if (!(dt > 0 && dt <= t_f)) throw ValidationError("o3 params: need 0 < dt <= t_f");
  if (!(kappa >= 0 && kappa < 1)) throw ValidationError("o3 params: need 0 <= kappa < 1");
  if (!(alpha >= 0)) throw ValidationError("o3 params: alpha must be >= 0");
}

std::size_t AnnealParamsO3::steps() const {
  return static_cast<std::size_t>(std::ceil(t_f / dt - 1e-9));
}

KickSample sample_kicks(std::size_t n, double kappa, std::uint64_t seed) {
  if (!(kappa >= 0 && kappa < 1.0 / std::numbers::sqrt2))
    throw ValidationError("sample_kicks: need 0 <= kappa < 1/sqrt(2)");
  KickSample k;
  k.delta.resize(n);
  k.eta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    k.delta[i] = rng_symmetric(seed, Stream::KickDelta, i, kappa);
    k.eta[i] = rng_symmetric(seed, Stream::KickEta, i, kappa);
  }
  return k;
}

SpinStateO3 kick_state(const KickSample& kicks) {
  SpinStateO3 state;
  state.m.resize(kicks.delta.size());
  for (std::size_t i = 0; i < kicks.delta.size(); ++i) {
    const double d = kicks.delta[i];
    const double e = kicks.eta[i];
    state.m[i] = {-std::sqrt(1.0 - d * d - e * e), d, e};
  }
  return state;
}

SpinStateO3 sample_kick_state(std::size_t n, double kappa, std::uint64_t seed) {
  return kick_state(sample_kicks(n, kappa, seed));
}

namespace {

// Shared accumulation for local_field / sweep_field; z_sign selects the sign
// of the coupling term.
void accumulate_fields(const CouplingTable& table, const std::vector<char>& active,
                       const SpinStateO3& state, double s, double h, double z_sign,
                       std::vector<Vec3>& out) {
  const double hx = (1.0 - s) * h;
  const std::size_t n = table.size();
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) {
      out[i] = {0.0, 0.0, 0.0};
      continue;
    }
    double bz = 0.0;
    for (const auto& [j, coupling] : table[i]) bz += coupling * state.m[j].z;
    out[i] = {hx, 0.0, z_sign * s * bz};
  }
}

}  // namespace

std::vector<Vec3> local_field(const Instance& inst, const SpinStateO3& state,
                              double s, double h) {
  if (!(s >= 0 && s <= 1)) throw ValidationError("local_field: s must be in [0, 1]");
  const CouplingTable table = build_coupling_table(inst);
  std::vector<Vec3> out;
  accumulate_fields(table, inst.graph.active, state, s, h, -1.0, out);
  return out;
}

std::vector<Vec3> sweep_field(const Instance& inst, const SpinStateO3& state,
                              double s, double h) {
  if (!(s >= 0 && s <= 1)) throw ValidationError("sweep_field: s must be in [0, 1]");
  const CouplingTable table = build_coupling_table(inst);
  std::vector<Vec3> out;
  accumulate_fields(table, inst.graph.active, state, s, h, +1.0, out);
  return out;
}

Vec3 apply_damping(const Vec3& field, const Vec3& m, double alpha) {
  return field + alpha * cross(field, m);
}

void step_rotate(SpinStateO3& state, const std::vector<Vec3>& fields, double dt) {
  for (std::size_t i = 0; i < state.m.size(); ++i) {
    const double mag = norm(fields[i]);
    if (mag < 1e-12) continue;
    state.m[i] = rotate_about(state.m[i], (1.0 / mag) * fields[i], mag * dt);
  }
}

void sweep_step(const Instance& inst, SpinStateO3& state, double s,
                const AnnealParamsO3& params) {
  auto fields = sweep_field(inst, state, s, params.h);
  if (params.alpha != 0.0) {
    for (std::size_t i = 0; i < fields.size(); ++i)
      fields[i] = apply_damping(fields[i], state.m[i], params.alpha);
  }
  step_rotate(state, fields, params.dt);
}

SpinConfig readout(const SpinStateO3& state) {
  SpinConfig cfg;
  cfg.sigma.resize(state.m.size());
  for (std::size_t i = 0; i < state.m.size(); ++i)
    cfg.sigma[i] = state.m[i].z < 0.0 ? -1 : 1;
  return cfg;
}

O3Runner::O3Runner(const Instance& inst, const AnnealParamsO3& params,
                   std::uint64_t seed)
    : O3Runner(inst, params,
               sample_kicks(std::size_t(inst.graph.n_vertices), params.kappa, seed)) {}

O3Runner::O3Runner(const Instance& inst, const AnnealParamsO3& params, KickSample kicks)
    : inst_(&inst), params_(params) {
  params_.validate();
  if (kicks.delta.size() != std::size_t(inst.graph.n_vertices) ||
      kicks.eta.size() != kicks.delta.size())
    throw ValidationError("o3: kick sample length does not match the instance");
  // Inactive vertices get no kick: they sit exactly on (-1, 0, 0), collinear
  // with any transverse field, and never move.
  for (int v = 0; v < inst.graph.n_vertices; ++v) {
    if (!inst.graph.active[v]) {
      kicks.delta[std::size_t(v)] = 0.0;
      kicks.eta[std::size_t(v)] = 0.0;
    }
  }
  table_ = build_coupling_table(inst);
  state_ = kick_state(kicks);
  total_ = params_.steps();
}

void O3Runner::step() {
  if (done()) return;
  const double s =
      std::min(1.0, (double(step_) + 0.5) * params_.dt / params_.t_f);
  accumulate_fields(table_, inst_->graph.active, state_, s, params_.h, +1.0, fields_);
  if (params_.alpha != 0.0) {
    for (std::size_t i = 0; i < fields_.size(); ++i)
      fields_[i] = apply_damping(fields_[i], state_.m[i], params_.alpha);
  }
  step_rotate(state_, fields_, params_.dt);
  ++step_;
}

SpinStateO3 run_o3(const Instance& inst, const AnnealParamsO3& params,
                   std::uint64_t seed) {
  O3Runner runner(inst, params, seed);
  while (!runner.done()) runner.step();
  return runner.state();
}

SpinStateO3 run_o3(const Instance& inst, const AnnealParamsO3& params,
                   KickSample kicks) {
  O3Runner runner(inst, params, std::move(kicks));
  while (!runner.done()) runner.step();
  return runner.state();
}

}  // namespace spindyn
