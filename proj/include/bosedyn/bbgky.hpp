// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file bbgky.hpp
 * @brief k-particle marginals, the first hierarchy equation, the collision
 *        and collapse operators, the transport solve, the Gross-Pitaevskii
 *        closure and the mean-field comparison.
 *
 * Two-point kernels K(X|X') are stored as row-major matrices indexed by the
 * flat lattice index of the first k particle slots. Integrals carry h^d per
 * integrated coordinate, so trace gamma_k = sum_X gamma_k(X|X) h^{dk}.
 */

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bosedyn/lattice.hpp"
#include "bosedyn/potentials.hpp"
#include "bosedyn/propagator.hpp"

namespace bosedyn {

using KernelMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// gamma_k(X_k | X'_k), or any two-point kernel on k particle slots.
struct Marginal {
  int k = 1;
  int d = 1;
  int M = 0;
  double L = 0.0;
  double t = 0.0;
  KernelMatrix values;

  std::size_t dim() const { return static_cast<std::size_t>(values.rows()); }
  double h() const { return L / M; }
  /// sum_X K(X|X) h^{dk}
  cplx trace() const;
};

/// gamma_k = sum over traced slots of psi(X, Y) conj(psi(X', Y)) h^{d(N-k)}.
/// k = N gives psi psi^dagger (needed for the N = 2 hierarchy). Throws
/// MemoryCapExceeded when (M^{dk})^2 exceeds `cap`, InvalidArgument unless
/// 1 <= k <= N.
Marginal marginal(const WaveFunction& psi, int k, std::size_t cap = kDefaultSiteCap);

/// sum_y gamma_{k+1}(X, y | X', y) h^d.
Marginal partial_trace(const Marginal& gamma);

struct MarginalReport {
  double hermiticity = 0.0;    ///< max |K - K^dagger| / max |K|
  double trace_error = 0.0;    ///< |trace - norm^2|
  double psd_min_eig = 0.0;    ///< smallest eigenvalue of K h^{dk} (k = 1 only, else 0)
  double bose_symmetry = 0.0;  ///< max deviation under simultaneous slot swaps (k = 2), relative
  double compatibility = 0.0;  ///< max |partial trace - gamma_{k-1}| / max |gamma_{k-1}| when given
};

MarginalReport check_marginal(const Marginal& gamma, double norm_sq = 1.0, const Marginal* lower = nullptr);

/// (N - k) sum_a sum_y [V(x_a - y) - V(x'_a - y)] gamma_{k+1}(X, y | X', y) h^d.
Marginal collision_apply(const Marginal& gamma_next, const PotentialSpec& spec, int N);

struct HierarchyResidual {
  double sup = 0.0;                ///< sup |i d_t gamma_1 - (Lap - Lap') gamma_1 + kappa C|
  double scale = 0.0;              ///< sup |i d_t gamma_1|
  double antihermitian_defect = 0.0;  ///< sup |R + R^dagger|
  double t = 0.0;
};

/// First hierarchy equation at interior snapshot i (centered difference),
/// with kappa = 2 for the ordered-pair potential field.
HierarchyResidual hierarchy_residual_k1(const Trajectory& traj, std::size_t i, const PotentialSpec& spec);

/// g [gamma_2(x, x | x', x) - gamma_2(x, x' | x', x')].
Marginal b2_collapse(const Marginal& gamma2, double g);

/// ||B||_{L^2_{1-1'}(L^1_{1+1'})} in the rotated coordinates (x +- x')/sqrt(2).
double b2_norm(const Marginal& B);

struct B2Bound {
  double norm = 0.0;        ///< b2_norm of the forcing
  double bound = 0.0;       ///< Cauchy-Schwarz bound, always >= norm
  double margin = 0.0;      ///< bound - norm
  double reference_form = 0.0;  ///< ||V||_1 sup_delta int rho_2(x, x + delta) dx, or int rho_2(x, x) dx
  double ratio = 0.0;       ///< norm / reference_form (empirical constant)
};

/// Finite-N forcing kappa (N - 1) C[gamma_2] and its bound
/// 2^{d/4} 2 kappa (N - 1) sqrt(E_V ||V||_1 m_2).
B2Bound finite_n_b2(const Marginal& gamma2, const PotentialSpec& spec, int N);
/// Delta-limit collapse and its bound 2^{d/4} 2 |g| sqrt(m_2 int rho_2(x, x) dx).
B2Bound limit_b2(const Marginal& gamma2, double g);

/// hat f(v, z) on the dual lattice v = m / L times the relative lattice z,
/// row-major (v, z).
struct TransportField {
  int d = 1;
  int M = 0;
  double L = 0.0;
  double t = 0.0;
  ComplexField values;
};

/// Transform of a two-point kernel in the sheared coordinates y = x', z = x - x':
/// hat B(v, z) = sum_y B(y + z, y) e^{-2 pi i v.y} h^d.
TransportField transport_transform(const Marginal& B);

struct TransportResult {
  std::vector<TransportField> fields;  ///< gamma_hat_1 at every forcing sample time
  double sup_norm_sq = 0.0;            ///< sup over t, v of ||gamma_hat_1(t, v, .)||^2_{L^2_z}
  double forcing_integral = 0.0;       ///< trapezoid of ||B(s)||^2_{L^2_z(L^1_y)} over [0, T]
  double margin = 0.0;                 ///< forcing_integral - sup_norm_sq
  double margin_scaled = 0.0;          ///< T forcing_integral - sup_norm_sq (holds for every T)
};

/// gamma_hat_1(t, v, z) = int_0^t hat B(s, v, z - 2 pi s v) ds with spectral
/// shifts and trapezoidal quadrature; forcing sample j sits at t = j dt.
/// Throws ForcingSampleGap unless there are T/dt + 1 samples on one grid.
TransportResult transport_solve(const std::vector<TransportField>& forcing, double T, double dt);

struct GPSample {
  double t = 0.0;
  double norm = 0.0;
  double mu = 0.0;
};

struct GPTrajectory {
  double g = 0.0;
  std::vector<WaveFunction> snapshots;
  std::vector<GPSample> samples;
};

/// mu = (g/2) int |phi|^4
double gp_mu(const WaveFunction& phi, double g);

/// Strang splitting of i d_t phi = Laplacian phi - g |phi|^2 phi + mu phi
/// (the N-body convention with V replaced by g |phi|^2 - mu).
GPTrajectory gp_solve(const WaveFunction& phi0, double g, double T, double dt, int stride = 1);

struct MeanFieldDistance {
  double hilbert_schmidt = 0.0;
  double trace_norm = 0.0;
};

/// Throws GridMismatch when phi is not on gamma_1's single-particle grid.
MeanFieldDistance mean_field_distance(const Marginal& gamma1, const WaveFunction& phi);

/// g = kappa (N - 1) sum_r V_N(r) h^d.
double mean_field_coupling(const PotentialSpec& member, const Grid& grid);

struct TrendPoint {
  int N = 0;
  double g = 0.0;
  double t = 0.0;
  MeanFieldDistance distance;
};

struct TrendOptions {
  int d = 1;
  int M = 32;
  double L = 8.0;
  double T = 0.5;
  double dt = 1e-3;
  std::vector<int> particle_counts{2, 3, 4};
};

/// N-body runs of the scaled family from phi0^{(x)N} against the GP run with
/// the matching coupling; one point per N in the order given.
std::vector<TrendPoint> mean_field_trend(const PotentialSpec& base, const Orbital& phi0, const TrendOptions& opts);

/// int64 k, d, M; float64 L; then interleaved complex entries, row-major.
void write_marginal(const std::string& path, const Marginal& gamma);
Marginal read_marginal(const std::string& path);

}  // namespace bosedyn
