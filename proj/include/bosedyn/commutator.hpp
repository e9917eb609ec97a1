// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file commutator.hpp
 * @brief Pair-reduced densities, the correlation functional C(t), the action
 *        L(t) = dC/dt, and the four-term decomposition of dL/dt.
 *
 * Every double integral over (X, X') is reduced pairwise to the relative
 * lattice r = x_a - x_b. With R the pair marginal of rho and
 * K(w) = |w|/sqrt(2) (minimal image), per unordered pair:
 *
 *   C   = <K * R, R>
 *   L   = -2 <grad K * R, Pi>,                 Pi = marginal of p_a - p_b
 *   L'  = 2 <Hess K * R : S> - 2 <Pi, Hess K * Pi>
 *         - 8 <Lap K * R, Lap R> - 2 <grad K * R, F>
 *
 * with S the marginal of 2 Re(D psi (x) conj(D psi)), D = grad_a - grad_b, and
 * F the marginal of 2 rho D V_field. S splits into a density-gradient part G
 * and a current part P, giving S_cm, S_cv, S_ds and S_pr.
 *
 * Kernels come in two routes. Route A differentiates the sampled lattice K
 * spectrally and takes F from the lattice product Re(conj(psi) D(V psi))
 * - V Re(conj(psi) D psi), which makes C' = L and L' = sum of S-terms hold to
 * spectral accuracy on the lattice for periodic data. Route B uses the analytic derivatives of K
 * (Hess K = (I - w w^T/|w|^2)/(sqrt(2)|w|), a delta of weight sqrt(2) in d = 1),
 * whose pointwise sign makes each term's positivity visible.
 */

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bosedyn/lattice.hpp"
#include "bosedyn/potentials.hpp"
#include "bosedyn/propagator.hpp"

namespace bosedyn {

/// rho~ on the relative lattice u = (x_a - x_b)/sqrt(2), spacing h/sqrt(2).
struct ReducedDensity {
  int a = 0;
  int b = 1;
  int d = 1;
  int M = 0;
  double h_rel = 0.0;
  RealField values;

  double integral() const;
  double square_integral() const;
};

/// Pair marginal R(r) = sum of rho over x_a - x_b = r, times h^{d(N-1)}.
RealField pair_marginal(const WaveFunction& psi, int a, int b);
ReducedDensity reduced_density(const WaveFunction& psi, int a, int b);

double correlation_C(const WaveFunction& psi);
/// Route A action.
double action_L(const WaveFunction& psi);
/// Action with the analytic kernel gradient w/(sqrt(2)|w|).
double action_L_analytic(const WaveFunction& psi);

struct ActionTerms {
  double t = 0.0;
  double L = 0.0;
  double L_analytic = 0.0;
  double L_dot = 0.0;  ///< dL/dt along the lattice generator, exact for the quartic L
  double C = 0.0;
  double S_cm = 0.0, S_cv = 0.0, S_ds = 0.0, S_pr = 0.0;          ///< route A
  double S_cm_B = 0.0, S_cv_B = 0.0, S_ds_B = 0.0, S_pr_B = 0.0;  ///< route B
  double S_ds_square = 0.0;     ///< sum over ordered pairs of integral rho~^2 du
  double excluded_mass = 0.0;  ///< mass below the density floor, dropped from G and P
  double l2 = 0.0;
  double h1 = 0.0;

  double sum_A() const { return S_cm + S_cv + S_ds + S_pr; }
  double abs_sum_A() const;
};

/// Relative density floor below which rho^{-1} terms are dropped.
inline constexpr double kDensityFloor = 1e-12;

ActionTerms action_terms(const WaveFunction& psi, const PotentialSpec& spec);
ActionTerms s_terms(const Trajectory& traj, std::size_t i, const PotentialSpec& spec);

/// S_ds in squared-density form from the direct sum of rho~^2.
double s_ds_direct(const WaveFunction& psi);
/// Same quantity from the full N-body transform of rho evaluated on the
/// two-particle anti-diagonal (k_a = k, k_b = -k, other slots 0).
double s_ds_fourier(const WaveFunction& psi);

struct ActionReport {
  std::vector<ActionTerms> samples;
  double dt = 0.0;
  double L_min_increment = 0.0;      ///< min (L_{i+1} - L_i) / scale
  double C_convexity_min = 0.0;      ///< min (C_{i+1} - 2C_i + C_{i-1}) / dt^2 / scale
  double CL_residual = 0.0;          ///< max |centered C' - L| / scale
  double decomposition_residual = 0.0;     ///< max |L_dot - sum S| / (sum |S|)
  double decomposition_residual_fd = 0.0;  ///< same with the centered difference of L in time
  double positivity_min_B = 0.0;     ///< min over samples and terms of S_B / scale
  double positivity_min_A = 0.0;     ///< same for route A
  double square_lhs = 0.0;           ///< integral dt of S_ds_square
  double square_rhs = 0.0;           ///< N^2 ||psi||_H1 ||psi||_L2^3 at t = 0
  double square_margin = 0.0;
  double L_bound_margin_min = 0.0;   ///< min over samples of ||psi||_H1 ||psi||^3 - |L|
  double L_bound_ratio_max = 0.0;    ///< max |L| / (||psi||_H1 ||psi||^3)
  double late_slope = 0.0;           ///< least-squares slope of C over the last half
  double late_fit_residual = 0.0;    ///< rms residual of that fit
  double scale = 0.0;                ///< ||psi(0)||_H1^2 ||psi(0)||_L2^2
};

ActionReport action_series(const std::vector<ActionTerms>& samples, double dt, int N);
ActionReport action_series(const Trajectory& traj, const PotentialSpec& spec);

/// r(w) = (|w|^2 I - w w^T) / |w|^3.
Eigen::MatrixXd r_kernel(const std::vector<double>& w);

struct KernelAudit {
  double min_quadratic_form = 0.0;
  double max_eigenvalue_error = 0.0;
  int samples = 0;
};

/// Random offsets and test vectors in dimension d from `seed`.
KernelAudit kernel_psd_audit(int d, int samples, unsigned long long seed);

}  // namespace bosedyn
