// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "bosedyn/propagator.hpp"

#include <cmath>

namespace bosedyn {

namespace {

RealField wavenumber_squared(const Grid& grid) {
  const Spectral& sp = Spectral::get(grid);
  RealField k2(sp.size());
  for (std::size_t i = 0; i < sp.size(); ++i) {
    double s = 0.0;
    for (int axis = 0; axis < sp.rank(); ++axis) {
      const double k = sp.wavenumber(sp.mode_index(i, axis), axis);
      s += k * k;
    }
    k2[i] = s;
  }
  return k2;
}

}  // namespace

EnergySplit energy(const WaveFunction& psi, const RealField& potential_field) {
  if (potential_field.size() != psi.values.size())
    throw Error(ErrorCode::GridMismatch, "potential field does not match the wave function grid");
  const Spectral& sp = Spectral::get(psi.grid);
  ComplexField hat(sp.size());
  sp.forward(psi.values.data(), hat.data());
  const RealField k2 = wavenumber_squared(psi.grid);
  EnergySplit e;
  for (std::size_t i = 0; i < hat.size(); ++i) e.kinetic += k2[i] * std::norm(hat[i]);
  e.kinetic *= psi.grid.cell_volume() / static_cast<double>(sp.size());
  for (std::size_t i = 0; i < psi.values.size(); ++i) e.potential += potential_field[i] * std::norm(psi.values[i]);
  e.potential *= psi.grid.cell_volume();
  return e;
}

EnergySplit energy(const WaveFunction& psi, const PotentialSpec& spec) {
  return energy(psi, pair_potential_field(psi.grid, spec));
}

Propagator::Propagator(const Grid& grid, const PotentialSpec& spec)
    : grid_(grid), field_(pair_potential_field(grid, spec)), k2_(wavenumber_squared(grid)) {}

void Propagator::ensure_phases(double dt) {
  if (dt == cached_dt_ && !half_kinetic_.empty()) return;
  half_kinetic_.resize(k2_.size());
  for (std::size_t i = 0; i < k2_.size(); ++i) half_kinetic_[i] = std::polar(1.0, 0.5 * k2_[i] * dt);
  potential_phase_.resize(field_.size());
  for (std::size_t i = 0; i < field_.size(); ++i) potential_phase_[i] = std::polar(1.0, field_[i] * dt);
  cached_dt_ = dt;
}

void Propagator::step(WaveFunction& psi, double dt) {
  if (!psi.grid.same_lattice(grid_)) throw Error(ErrorCode::GridMismatch, "propagator grid mismatch");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  ensure_phases(dt);
  const Spectral& sp = Spectral::get(grid_);
  scratch_.resize(sp.size());
  auto& v = psi.values;
  sp.forward(v.data(), scratch_.data());
  for (std::size_t i = 0; i < v.size(); ++i) scratch_[i] *= half_kinetic_[i];
  sp.inverse(scratch_.data(), v.data());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= potential_phase_[i];
  sp.forward(v.data(), scratch_.data());
  for (std::size_t i = 0; i < v.size(); ++i) scratch_[i] *= half_kinetic_[i];
  sp.inverse(scratch_.data(), v.data());
  for (const cplx& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorCode::NonFiniteValues, "non-finite values after step at t = " + std::to_string(psi.t));
  psi.t += dt;
}

WaveFunction step(const WaveFunction& psi, double dt, const PotentialSpec& spec) {
  Propagator prop(psi.grid, spec);
  WaveFunction out = psi;
  prop.step(out, dt);
  return out;
}

Trajectory evolve(const WaveFunction& psi0, const PotentialSpec& spec, double T, double dt,
                  const EvolveOptions& options) {
  if (!(T >= 0.0)) throw Error(ErrorCode::InvalidArgument, "T must be nonnegative");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (options.stride < 1) throw Error(ErrorCode::InvalidArgument, "sample stride must be at least 1");
  const long steps = std::lround(T / dt);
  if (std::abs(steps * dt - T) > 1e-9 * std::max(1.0, T))
    throw Error(ErrorCode::InvalidArgument, "dt must divide T");
  if (steps % options.stride != 0)
    throw Error(ErrorCode::InvalidArgument, "T must be a multiple of the sampling interval");

  Propagator prop(psi0.grid, spec);
  Trajectory traj;
  traj.dt = dt;
  traj.stride = options.stride;
  WaveFunction psi = psi0;
  const double t0 = psi0.t;
  bool warned = false;

  auto record = [&] {
    Sample s;
    s.t = psi.t;
    s.l2 = l2_norm(psi);
    s.h1 = h1_norm(psi);
    const EnergySplit e = energy(psi, prop.potential_field());
    s.e_kin = e.kinetic;
    s.e_pot = e.potential;
    s.boundary = boundary_mass(psi);
    if (s.boundary > options.boundary_warning && !warned) {
      traj.warnings.push_back("boundary-mass-warning: mass fraction " + std::to_string(s.boundary) +
                              " within 2h of the box faces at t = " + std::to_string(s.t));
      warned = true;
    }
    traj.samples.push_back(s);
    if (options.keep_snapshots) traj.snapshots.push_back(psi);
    if (options.on_sample) options.on_sample(psi, s);
  };

  record();
  for (long n = 1; n <= steps; ++n) {
    prop.step(psi, dt);
    // Re-anchor time to avoid accumulating rounding in t.
    psi.t = t0 + n * dt;
    if (n % options.stride == 0) record();
  }
  return traj;
}

}  // namespace bosedyn
