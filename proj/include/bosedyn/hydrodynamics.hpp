// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hydrodynamics.hpp
 * @brief Density, momentum density, stress tensor and pair forces of an
 *        N-body wave function, plus lattice residuals of the mass and
 *        momentum evolution laws.
 */

#pragma once

#include <vector>

#include "bosedyn/lattice.hpp"
#include "bosedyn/potentials.hpp"
#include "bosedyn/propagator.hpp"

namespace bosedyn {

/// Multiplicity of the force term in the momentum law when the potential
/// field sums over ordered pairs: d_t p picks up |psi|^2 grad V_field = -2 M rho.
inline constexpr double kOrderedPairForceFactor = 2.0;

struct HydroFields {
  RealField rho;              ///< rho = |psi|^2 / 2
  std::vector<RealField> p;   ///< p[a*d + j] = Im(conj(psi) d_{a,j} psi)
  double t = 0.0;
};

RealField density(const WaveFunction& psi);
std::vector<RealField> momentum(const WaveFunction& psi);
HydroFields hydro_fields(const WaveFunction& psi);

/// sigma^{ab}_{jk} = 2 Re(d_{a,j} psi conj(d_{b,k} psi)), returned as d*d fields, index j*d + k.
std::vector<RealField> stress(const WaveFunction& psi, int a, int b);

struct ForceData {
  int N = 0;
  int d = 0;
  std::vector<RealField> w;     ///< unordered pair (a<b) in lexicographic order; w_ab = -2 V'(|x_a - x_b|)
  std::vector<RealField> Mvec;  ///< M[a*d + j] = sum_{b != a} w_ab (x_a - x_b)_j / |x_a - x_b|

  const RealField& weight(int a, int b) const;
};

int pair_count(int N);
/// Position of unordered pair (a,b), a != b, in lexicographic order.
int pair_index(int N, int a, int b);

ForceData force_data(const Grid& grid, const PotentialSpec& spec);

struct LawResidual {
  double sup = 0.0;      ///< sup-norm of the residual
  double scale = 0.0;    ///< sup-norm of the time-derivative term, for relative reading
  int worst_axis = -1;   ///< a*d + j achieving the sup (momentum law only)
  double t = 0.0;
};

/// d_t rho - div p at interior sample i, centered difference in time.
LawResidual mass_residual(const Trajectory& traj, std::size_t i);

/// d_t p - div sigma + grad(Laplacian rho) + 2 M rho at interior sample i.
LawResidual momentum_residual(const Trajectory& traj, std::size_t i, const PotentialSpec& spec);

/// Row divergences sum_beta d_beta sigma_{alpha beta}, one field per axis alpha.
std::vector<RealField> stress_divergence(const WaveFunction& psi);
/// grad(Laplacian rho), one field per axis.
std::vector<RealField> density_gradient_laplacian(const WaveFunction& psi);

/// The force contribution 2 M rho per axis.
std::vector<RealField> force_term(const WaveFunction& psi, const ForceData& forces);

}  // namespace bosedyn
