// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file morawetz.hpp
 * @brief Pair contraction fields, collapsed densities, the interaction and
 *        stress terms of the interaction Morawetz identity, and the
 *        space-time balance built from them.
 *
 * All contraction fields are gradients of D(X) = sum_{a != b} |x_a - x_b - s|
 * for a fixed lattice shift s (s = 0 is the unshifted case), summed over
 * ordered pairs.
 */

#pragma once

#include <vector>

#include "bosedyn/hydrodynamics.hpp"
#include "bosedyn/lattice.hpp"
#include "bosedyn/potentials.hpp"
#include "bosedyn/propagator.hpp"

namespace bosedyn {

/// Integer lattice shift of the relative coordinate, d components.
using LatticeShift = std::vector<int>;

/// Sum of rho over the lattice hyperplane x_a - x_b = shift, times h^{d(N-1)}.
double collapsed_mass(const WaveFunction& psi, int a, int b, const LatticeShift& shift = {});

/// Y_(ab) as N*d axis fields: u(x_a - x_b - s) in slot a, its negative in slot b.
std::vector<RealField> contraction_Y(const Grid& grid, int a, int b, const LatticeShift& shift = {});
/// Sum of Y_(ab) over ordered pairs a != b.
std::vector<RealField> contraction_Y_total(const Grid& grid, const LatticeShift& shift = {});

/// Pointwise divergence of Y_(ab): 2(d-1)/|r| away from coincidence; in d = 1
/// the lattice delta 4/h at r = 0 and -4/h at the antipode (the sign flips back
/// across the periodic seam).
RealField div_Y(const Grid& grid, int a, int b);

/// Constant c_d with -integral div Y Laplacian(rho) = c_d m_ab per ordered
/// pair: 32 pi for d = 3. In d = 1 this returns 4, the delta weight of div Y,
/// which multiplies the diagonal of Laplacian(rho) rather than rho; NaN for d = 2.
double collapse_constant(int d);

/// Interaction term: sum over ordered pairs of
/// (M^a . u_ab + M^b . u_ba) rho, integrated.
double interaction_term(const WaveFunction& psi, const ForceData& forces);
double interaction_term(const WaveFunction& psi, const PotentialSpec& spec);

/// Stress term in positivity form: per ordered pair 2 (D psi)^dagger H (D psi)
/// with D = grad_a - grad_b and H the Hessian of |r| (projection/|r| for d >= 2,
/// lattice delta 2/h at r = 0 for d = 1).
double sigma_term(const WaveFunction& psi);

/// Weak-form pieces of d_t <p, Y> = -(Sigma_w + K_w + E_w).
struct WeakTerms {
  double sigma = 0.0;        ///< -<Y, div sigma>
  double kinetic = 0.0;      ///< <Y, grad Laplacian rho>
  double interaction = 0.0;  ///< 2 <Y, M rho>
  double boundary = 0.0;     ///< B = <p, Y>
};

WeakTerms weak_terms(const WaveFunction& psi, const ForceData& forces, const LatticeShift& shift = {});

/// V_D = integral rho D.
double variance_functional(const WaveFunction& psi, const LatticeShift& shift = {});

struct MorawetzSample {
  double t = 0.0;
  std::vector<double> m;    ///< collapsed masses, ordered pairs (a,b), a != b, a-major
  double interaction = 0.0; ///< interaction term
  double sigma = 0.0;       ///< positivity form
  WeakTerms weak;
  double variance = 0.0;
  double boundary_bound = 0.0;  ///< sum_{a != b} ||psi|| (||grad_a psi|| + ||grad_b psi||)
  double l2 = 0.0;
  double h1 = 0.0;
};

struct PositivitySeries {
  std::vector<MorawetzSample> samples;
  std::vector<double> variance_second_difference;  ///< (V_{i+1} - 2V_i + V_{i-1}) / dt^2, interior i
};

struct BalanceReport {
  PositivitySeries series;
  LatticeShift shift;
  double c_d = 0.0;
  double integral_sigma = 0.0;
  double integral_kinetic = 0.0;
  double integral_interaction = 0.0;
  double boundary_difference = 0.0;  ///< B(0) - B(T)
  double balance_residual = 0.0;     ///< |sum of integrals - boundary difference|
  double collapsed_total = 0.0;      ///< sum_{a != b} integral m_ab dt
  double collapsed_scaled = 0.0;     ///< c_d * collapsed_total
  double collapsed_bound = 0.0;      ///< N^2 ||psi(0)||_H1 ||psi(0)||_L2
  double inequality_margin = 0.0;    ///< collapsed_bound - collapsed_total
  double pair_margin_min = 0.0;      ///< min over pairs of ||psi||_H1 ||psi||_L2 - integral m_ab
  double interaction_min = 0.0;      ///< min interaction / ||psi||_H1^2
  double sigma_min = 0.0;            ///< min sigma / ||psi||_H1^2
  double convexity_min = 0.0;        ///< min second difference of V_D / ||psi||_H1^2
  double boundary_margin_min = 0.0;  ///< min over samples of bound - |B|
};

PositivitySeries variance_series(const Trajectory& traj, const PotentialSpec& spec, const LatticeShift& shift = {});
BalanceReport estimate_balance(const Trajectory& traj, const PotentialSpec& spec, const LatticeShift& shift = {});

/// Trapezoidal time integral of uniformly spaced values.
double trapezoid(const std::vector<double>& values, double dt);

}  // namespace bosedyn
