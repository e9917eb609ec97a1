// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file propagator.hpp
 * @brief Strang split-step evolution of i d/dt psi = Laplacian(psi) - V psi
 *        and the conserved energy of that flow.
 */

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bosedyn/lattice.hpp"
#include "bosedyn/potentials.hpp"

namespace bosedyn {

struct EnergySplit {
  double kinetic = 0.0;
  double potential = 0.0;
  double total() const { return kinetic + potential; }
};

/// E = sum_k |k|^2 |psi_hat|^2 + integral of V_field |psi|^2.
EnergySplit energy(const WaveFunction& psi, const PotentialSpec& spec);
EnergySplit energy(const WaveFunction& psi, const RealField& potential_field);

/// Reusable propagator for one grid and potential. The kinetic multipliers
/// are cached per dt.
class Propagator {
 public:
  Propagator(const Grid& grid, const PotentialSpec& spec);

  const Grid& grid() const { return grid_; }
  const RealField& potential_field() const { return field_; }

  /// One Strang step: half kinetic, full potential, half kinetic.
  void step(WaveFunction& psi, double dt);

 private:
  void ensure_phases(double dt);

  Grid grid_;
  RealField field_;
  RealField k2_;
  double cached_dt_ = 0.0;
  ComplexField half_kinetic_;
  ComplexField potential_phase_;
  ComplexField scratch_;
};

WaveFunction step(const WaveFunction& psi, double dt, const PotentialSpec& spec);

struct Sample {
  double t = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
  double e_kin = 0.0;
  double e_pot = 0.0;
  double boundary = 0.0;
};

struct Trajectory {
  double dt = 0.0;
  int stride = 1;
  std::vector<WaveFunction> snapshots;
  std::vector<Sample> samples;
  std::vector<std::string> warnings;

  /// Spacing between stored samples.
  double sample_dt() const { return dt * stride; }
};

struct EvolveOptions {
  int stride = 1;
  bool keep_snapshots = true;
  double boundary_warning = 1e-8;
  std::function<void(const WaveFunction&, const Sample&)> on_sample;
};

/// Runs round(T/dt) steps; T must be a multiple of the sampling interval
/// dt*stride. A sample (and snapshot) is recorded at t = 0 and every stride steps.
Trajectory evolve(const WaveFunction& psi0, const PotentialSpec& spec, double T, double dt,
                  const EvolveOptions& options = {});

}  // namespace bosedyn
