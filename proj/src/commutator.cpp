// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "bosedyn/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bosedyn/hydrodynamics.hpp"
#include "bosedyn/morawetz.hpp"

namespace bosedyn {

namespace {

const double kSqrt2 = std::sqrt(2.0);

const Spectral& relative_spectral(const Grid& g) {
  return Spectral::get(std::vector<int>(static_cast<std::size_t>(g.d), g.M), g.L);
}

double marginal_measure(const Grid& g) { return std::pow(g.h, g.d * (g.N - 1)); }

double dot(const RealField& x, const RealField& y, double vol) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s * vol;
}

/// Marginals of one unordered pair on the relative lattice.
struct PairData {
  RealField R;
  std::vector<RealField> Pi;  ///< d
  std::vector<RealField> S;   ///< d*d, full 2 Re(D psi conj(D psi))
  std::vector<RealField> G;   ///< d*d, rho^{-1} D rho D rho above the floor
  std::vector<RealField> P;   ///< d*d, rho^{-1} p_D p_D above the floor
  std::vector<RealField> F;   ///< d, 2 rho D V_field with the analytic force
  std::vector<RealField> FL;  ///< d, Re(conj(psi) D(V psi)) - V Re(conj(psi) D psi)
  double excluded = 0.0;
};

PairData pair_data(const WaveFunction& psi, int a, int b, const ForceData* forces, const RealField* vfield,
                   double rho_floor) {
  const Grid& g = psi.grid;
  const int d = g.d;
  const std::size_t rel = static_cast<std::size_t>(std::pow(g.M, d));
  PairData pd;
  pd.R.assign(rel, 0.0);
  pd.Pi.assign(d, RealField(rel, 0.0));
  pd.S.assign(d * d, RealField(rel, 0.0));
  pd.G.assign(d * d, RealField(rel, 0.0));
  pd.P.assign(d * d, RealField(rel, 0.0));
  pd.F.assign(d, RealField(rel, 0.0));
  pd.FL.assign(d, RealField(rel, 0.0));

  const Spectral& sp = Spectral::get(g);
  ComplexField hat(sp.size()), work(sp.size());
  sp.forward(psi.values.data(), hat.data());
  auto relative_derivative = [&](const ComplexField& in_hat, int j, ComplexField& out) {
    const int ax = a * d + j, bx = b * d + j;
    for (std::size_t n = 0; n < sp.size(); ++n)
      work[n] = in_hat[n] * cplx(0.0, sp.derivative_wavenumber(sp.mode_index(n, ax), ax) -
                                          sp.derivative_wavenumber(sp.mode_index(n, bx), bx));
    sp.inverse(work.data(), out.data());
  };
  std::vector<ComplexField> Dpsi(static_cast<std::size_t>(d), ComplexField(sp.size()));
  for (int j = 0; j < d; ++j) relative_derivative(hat, j, Dpsi[j]);
  std::vector<ComplexField> DVpsi;
  if (vfield) {
    ComplexField vpsi(sp.size());
    for (std::size_t s = 0; s < g.sites; ++s) vpsi[s] = (*vfield)[s] * psi.values[s];
    sp.forward(vpsi.data(), hat.data());
    DVpsi.assign(static_cast<std::size_t>(d), ComplexField(sp.size()));
    for (int j = 0; j < d; ++j) relative_derivative(hat, j, DVpsi[j]);
  }

  std::vector<double> drho(d), pD(d);
  for (std::size_t s = 0; s < g.sites; ++s) {
    const std::size_t r = relative_index(g, s, a, b);
    const cplx z = psi.values[s];
    const double rho = 0.5 * std::norm(z);
    pd.R[r] += rho;
    for (int j = 0; j < d; ++j) {
      const cplx q = std::conj(z) * Dpsi[j][s];
      drho[j] = q.real();
      pD[j] = q.imag();
      pd.Pi[j][r] += pD[j];
      if (forces) pd.F[j][r] += 2.0 * rho * (forces->Mvec[b * d + j][s] - forces->Mvec[a * d + j][s]);
      if (vfield) pd.FL[j][r] += std::real(std::conj(z) * DVpsi[j][s]) - (*vfield)[s] * drho[j];
    }
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) pd.S[j * d + k][r] += 2.0 * std::real(Dpsi[j][s] * std::conj(Dpsi[k][s]));
    if (rho < rho_floor) {
      pd.excluded += rho;
      continue;
    }
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        pd.G[j * d + k][r] += drho[j] * drho[k] / rho;
        pd.P[j * d + k][r] += pD[j] * pD[k] / rho;
      }
  }
  const double mm = marginal_measure(g);
  auto scale = [mm](RealField& f) {
    for (double& v : f) v *= mm;
  };
  scale(pd.R);
  for (auto* group : {&pd.Pi, &pd.S, &pd.G, &pd.P, &pd.F, &pd.FL})
    for (RealField& f : *group) scale(f);
  pd.excluded *= g.cell_volume();
  return pd;
}

/// Kernel K = |w|/sqrt(2) and its derivatives on the relative lattice.
struct Kernels {
  RealField K;
  std::vector<RealField> gradA, gradB;  ///< d
  std::vector<RealField> hessA, hessB;  ///< d*d
  RealField lapA;
};

Kernels make_kernels(const Grid& g, bool with_second_derivatives) {
  const RelativeLattice rl = make_relative_lattice(g);
  const Spectral& rs = relative_spectral(g);
  const int d = g.d;
  Kernels k;
  k.K.resize(rl.size);
  for (std::size_t r = 0; r < rl.size; ++r) k.K[r] = rl.dist[r] / kSqrt2;
  for (int j = 0; j < d; ++j) {
    k.gradA.push_back(rs.derivative(k.K, j));
    RealField gb(rl.size);
    for (std::size_t r = 0; r < rl.size; ++r) gb[r] = rl.unit_of(r, j) / kSqrt2;
    k.gradB.push_back(std::move(gb));
  }
  if (!with_second_derivatives) return k;
  k.lapA.assign(rl.size, 0.0);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      k.hessA.push_back(rs.mixed_derivative(k.K, j, i));
      if (i == j)
        for (std::size_t r = 0; r < rl.size; ++r) k.lapA[r] += k.hessA.back()[r];
      RealField hb(rl.size, 0.0);
      for (std::size_t r = 0; r < rl.size; ++r) {
        if (d == 1) {
          if (rl.offset_of(r, 0) == 0) hb[r] = kSqrt2 / g.h;
          continue;
        }
        const double w = rl.dist[r];
        if (w == 0.0) continue;
        const double wj = rl.offset_of(r, j) * g.h / w, wi = rl.offset_of(r, i) * g.h / w;
        hb[r] = ((i == j ? 1.0 : 0.0) - wj * wi) / (kSqrt2 * w);
      }
      k.hessB.push_back(std::move(hb));
    }
  return k;
}

RealField convolve(const Spectral& rs, const RealField& kernel, const RealField& f, double vol) {
  RealField out = rs.convolve(kernel, f);
  for (double& v : out) v *= vol;
  return out;
}

void check_pair(const Grid& g, int a, int b) {
  if (a == b || a < 0 || b < 0 || a >= g.N || b >= g.N) throw Error(ErrorCode::IndexOutOfRange, "invalid particle pair");
}

}  // namespace

double ReducedDensity::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * std::pow(h_rel, d);
}

double ReducedDensity::square_integral() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s * std::pow(h_rel, d);
}

RealField pair_marginal(const WaveFunction& psi, int a, int b) {
  const Grid& g = psi.grid;
  check_pair(g, a, b);
  RealField R(static_cast<std::size_t>(std::pow(g.M, g.d)), 0.0);
  for (std::size_t s = 0; s < g.sites; ++s) R[relative_index(g, s, a, b)] += 0.5 * std::norm(psi.values[s]);
  const double mm = marginal_measure(g);
  for (double& v : R) v *= mm;
  return R;
}

ReducedDensity reduced_density(const WaveFunction& psi, int a, int b) {
  ReducedDensity rd;
  rd.a = a;
  rd.b = b;
  rd.d = psi.grid.d;
  rd.M = psi.grid.M;
  rd.h_rel = psi.grid.h / kSqrt2;
  rd.values = pair_marginal(psi, a, b);
  const double jac = std::pow(2.0, 0.5 * rd.d);
  for (double& v : rd.values) v *= jac;
  return rd;
}

double correlation_C(const WaveFunction& psi) {
  const Grid& g = psi.grid;
  const Kernels k = make_kernels(g, false);
  const Spectral& rs = relative_spectral(g);
  const double vol = g.slot_volume();
  double C = 0.0;
  for (int a = 0; a < g.N; ++a)
    for (int b = a + 1; b < g.N; ++b) {
      const RealField R = pair_marginal(psi, a, b);
      C += dot(convolve(rs, k.K, R, vol), R, vol);
    }
  return C;
}

namespace {

double action_with(const WaveFunction& psi, bool analytic) {
  const Grid& g = psi.grid;
  const Kernels k = make_kernels(g, false);
  const Spectral& rs = relative_spectral(g);
  const double vol = g.slot_volume();
  double L = 0.0;
  for (int a = 0; a < g.N; ++a)
    for (int b = a + 1; b < g.N; ++b) {
      const PairData pd = pair_data(psi, a, b, nullptr, nullptr, 0.0);
      for (int j = 0; j < g.d; ++j)
        L -= 2.0 * dot(convolve(rs, analytic ? k.gradB[j] : k.gradA[j], pd.R, vol), pd.Pi[j], vol);
    }
  return L;
}

}  // namespace

double action_L(const WaveFunction& psi) { return action_with(psi, false); }
double action_L_analytic(const WaveFunction& psi) { return action_with(psi, true); }

namespace {

/// Derivative of L along psi_dot = -i (Laplacian psi - V psi). L is quartic in
/// (psi, conj psi), so the five-point stencil is exact up to rounding.
double generator_derivative(const WaveFunction& psi, const RealField& vfield) {
  const Spectral& sp = Spectral::get(psi.grid);
  const ComplexField lap = sp.laplacian(psi.values);
  ComplexField dir(lap.size());
  double n2 = 0.0, d2 = 0.0;
  for (std::size_t s = 0; s < lap.size(); ++s) {
    dir[s] = cplx(0.0, -1.0) * (lap[s] - vfield[s] * psi.values[s]);
    n2 += std::norm(psi.values[s]);
    d2 += std::norm(dir[s]);
  }
  if (d2 == 0.0) return 0.0;
  const double eps = 1e-2 * std::sqrt(n2 / d2);
  auto shifted = [&](double c) {
    WaveFunction q = psi;
    for (std::size_t s = 0; s < dir.size(); ++s) q.values[s] += c * eps * dir[s];
    return action_L(q);
  };
  return (-shifted(2.0) + 8.0 * shifted(1.0) - 8.0 * shifted(-1.0) + shifted(-2.0)) / (12.0 * eps);
}

}  // namespace

double ActionTerms::abs_sum_A() const { return std::abs(S_cm) + std::abs(S_cv) + std::abs(S_ds) + std::abs(S_pr); }

ActionTerms action_terms(const WaveFunction& psi, const PotentialSpec& spec) {
  const Grid& g = psi.grid;
  const int d = g.d;
  const Kernels k = make_kernels(g, true);
  const Spectral& rs = relative_spectral(g);
  const double vol = g.slot_volume();
  const ForceData forces = force_data(g, spec);
  const RealField vfield = pair_potential_field(g, spec);
  double rho_max = 0.0;
  for (cplx z : psi.values) rho_max = std::max(rho_max, 0.5 * std::norm(z));

  ActionTerms t;
  t.t = psi.t;
  t.l2 = l2_norm(psi);
  t.h1 = h1_norm(psi);
  t.L_dot = generator_derivative(psi, vfield);
  for (int a = 0; a < g.N; ++a)
    for (int b = a + 1; b < g.N; ++b) {
      const PairData pd = pair_data(psi, a, b, &forces, &vfield, kDensityFloor * rho_max);
      t.excluded_mass = std::max(t.excluded_mass, pd.excluded);
      t.C += dot(convolve(rs, k.K, pd.R, vol), pd.R, vol);

      for (int j = 0; j < d; ++j) {
        const RealField gA = convolve(rs, k.gradA[j], pd.R, vol);
        const RealField gB = convolve(rs, k.gradB[j], pd.R, vol);
        t.L -= 2.0 * dot(gA, pd.Pi[j], vol);
        t.L_analytic -= 2.0 * dot(gB, pd.Pi[j], vol);
        t.S_pr -= 2.0 * dot(gA, pd.FL[j], vol);
        t.S_pr_B -= 2.0 * dot(gB, pd.F[j], vol);
      }
      for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
          const std::size_t ji = static_cast<std::size_t>(j * d + i);
          const RealField hA = convolve(rs, k.hessA[ji], pd.R, vol);
          const RealField hB = convolve(rs, k.hessB[ji], pd.R, vol);
          RealField cur(pd.S[ji].size());
          for (std::size_t r = 0; r < cur.size(); ++r) cur[r] = pd.S[ji][r] - pd.G[ji][r];
          t.S_cm += 2.0 * dot(hA, pd.G[ji], vol);
          t.S_cv += 2.0 * dot(hA, cur, vol) - 2.0 * dot(pd.Pi[j], convolve(rs, k.hessA[ji], pd.Pi[i], vol), vol);
          t.S_cm_B += 2.0 * dot(hB, pd.G[ji], vol);
          t.S_cv_B +=
              2.0 * dot(hB, pd.P[ji], vol) - 2.0 * dot(pd.Pi[j], convolve(rs, k.hessB[ji], pd.Pi[i], vol), vol);
        }
      t.S_ds -= 8.0 * dot(convolve(rs, k.lapA, pd.R, vol), rs.laplacian(pd.R), vol);

      const double R2 = dot(pd.R, pd.R, vol);
      if (d == 1) {
        const RealField dR = rs.derivative(pd.R, 0);
        t.S_ds_B += 8.0 * kSqrt2 * dot(dR, dR, vol);
      } else if (d == 3) {
        t.S_ds_B += 32.0 * kSqrt2 * kPi * R2;
      } else {
        t.S_ds_B = std::numeric_limits<double>::quiet_NaN();
      }
      t.S_ds_square += 2.0 * std::pow(2.0, 0.5 * d) * R2;
    }
  return t;
}

ActionTerms s_terms(const Trajectory& traj, std::size_t i, const PotentialSpec& spec) {
  if (i >= traj.snapshots.size()) throw Error(ErrorCode::InsufficientSnapshots, "sample index beyond trajectory");
  return action_terms(traj.snapshots[i], spec);
}

double s_ds_direct(const WaveFunction& psi) {
  double s = 0.0;
  for (int a = 0; a < psi.grid.N; ++a)
    for (int b = 0; b < psi.grid.N; ++b)
      if (a != b) s += reduced_density(psi, a, b).square_integral();
  return s;
}

double s_ds_fourier(const WaveFunction& psi) {
  const Grid& g = psi.grid;
  const Spectral& sp = Spectral::get(g);
  ComplexField rho(g.sites), hat(g.sites);
  for (std::size_t s = 0; s < g.sites; ++s) rho[s] = 0.5 * std::norm(psi.values[s]);
  sp.forward(rho.data(), hat.data());
  const std::size_t rel = static_cast<std::size_t>(std::pow(g.M, g.d));
  const double mm = marginal_measure(g);
  double total = 0.0;
  for (int a = 0; a < g.N; ++a)
    for (int b = 0; b < g.N; ++b) {
      if (a == b) continue;
      double acc = 0.0;
      for (std::size_t q = 0; q < rel; ++q) {
        std::size_t flat = 0, rest = q;
        for (int j = g.d - 1; j >= 0; --j) {
          const int m = static_cast<int>(rest % g.M);
          rest /= g.M;
          flat += static_cast<std::size_t>(m) * g.axis_stride(a * g.d + j);
          flat += static_cast<std::size_t>((g.M - m) % g.M) * g.axis_stride(b * g.d + j);
        }
        acc += std::norm(hat[flat] * mm);
      }
      // Parseval on the relative lattice, then the u-Jacobian 2^{d/2}.
      total += std::pow(2.0, 0.5 * g.d) * acc * g.slot_volume() / static_cast<double>(rel);
    }
  return total;
}

ActionReport action_series(const std::vector<ActionTerms>& samples, double dt, int N) {
  ActionReport rep;
  rep.samples = samples;
  rep.dt = dt;
  if (samples.empty()) return rep;
  const auto& s0 = samples.front();
  rep.scale = s0.h1 * s0.h1 * s0.l2 * s0.l2;
  const double sc = rep.scale;
  const std::size_t n = samples.size();

  rep.L_min_increment = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i)
    rep.L_min_increment = std::min(rep.L_min_increment, (samples[i + 1].L - samples[i].L) / sc);
  if (n < 2) rep.L_min_increment = 0.0;

  rep.C_convexity_min = n < 3 ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double c2 = (samples[i + 1].C - 2.0 * samples[i].C + samples[i - 1].C) / (dt * dt);
    rep.C_convexity_min = std::min(rep.C_convexity_min, c2 / sc);
    const double cdot = (samples[i + 1].C - samples[i - 1].C) / (2.0 * dt);
    rep.CL_residual = std::max(rep.CL_residual, std::abs(cdot - samples[i].L) / sc);
    const double ldot = (samples[i + 1].L - samples[i - 1].L) / (2.0 * dt);
    const double denom = samples[i].abs_sum_A();
    if (denom > 0.0)
      rep.decomposition_residual_fd =
          std::max(rep.decomposition_residual_fd, std::abs(ldot - samples[i].sum_A()) / denom);
  }
  for (const auto& s : samples)
    if (s.abs_sum_A() > 0.0)
      rep.decomposition_residual = std::max(rep.decomposition_residual, std::abs(s.L_dot - s.sum_A()) / s.abs_sum_A());

  rep.positivity_min_A = rep.positivity_min_B = std::numeric_limits<double>::infinity();
  rep.L_bound_margin_min = std::numeric_limits<double>::infinity();
  std::vector<double> sds;
  for (const auto& s : samples) {
    for (double v : {s.S_cm, s.S_cv, s.S_ds, s.S_pr}) rep.positivity_min_A = std::min(rep.positivity_min_A, v / sc);
    for (double v : {s.S_cm_B, s.S_cv_B, s.S_ds_B, s.S_pr_B})
      if (!std::isnan(v)) rep.positivity_min_B = std::min(rep.positivity_min_B, v / sc);
    const double bound = s.h1 * std::pow(s.l2, 3);
    rep.L_bound_margin_min = std::min(rep.L_bound_margin_min, bound - std::abs(s.L));
    rep.L_bound_ratio_max = std::max(rep.L_bound_ratio_max, std::abs(s.L) / bound);
    sds.push_back(s.S_ds_square);
  }
  rep.square_lhs = trapezoid(sds, dt);
  rep.square_rhs = static_cast<double>(N) * N * s0.h1 * std::pow(s0.l2, 3);
  rep.square_margin = rep.square_rhs - rep.square_lhs;

  const std::size_t start = n / 2;
  if (n - start >= 2) {
    double st = 0, sc2 = 0, stt = 0, stc = 0;
    const double m = static_cast<double>(n - start);
    for (std::size_t i = start; i < n; ++i) {
      st += samples[i].t;
      sc2 += samples[i].C;
      stt += samples[i].t * samples[i].t;
      stc += samples[i].t * samples[i].C;
    }
    const double den = m * stt - st * st;
    if (den > 0.0) {
      rep.late_slope = (m * stc - st * sc2) / den;
      const double icpt = (sc2 - rep.late_slope * st) / m;
      double ss = 0.0;
      for (std::size_t i = start; i < n; ++i) ss += std::pow(samples[i].C - icpt - rep.late_slope * samples[i].t, 2);
      rep.late_fit_residual = std::sqrt(ss / m);
    }
  }
  return rep;
}

ActionReport action_series(const Trajectory& traj, const PotentialSpec& spec) {
  if (traj.snapshots.empty()) throw Error(ErrorCode::InsufficientSnapshots, "trajectory holds no snapshots");
  std::vector<ActionTerms> samples;
  for (const auto& psi : traj.snapshots) samples.push_back(action_terms(psi, spec));
  return action_series(samples, traj.sample_dt(), traj.snapshots.front().grid.N);
}

Eigen::MatrixXd r_kernel(const std::vector<double>& w) {
  const Eigen::Map<const Eigen::VectorXd> v(w.data(), static_cast<Eigen::Index>(w.size()));
  const double n = v.norm();
  if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "kernel offset must be nonzero");
  const auto d = static_cast<Eigen::Index>(w.size());
  return (n * n * Eigen::MatrixXd::Identity(d, d) - v * v.transpose()) / (n * n * n);
}

KernelAudit kernel_psd_audit(int d, int samples, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  KernelAudit audit;
  audit.samples = samples;
  audit.min_quadratic_form = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    std::vector<double> w(static_cast<std::size_t>(d));
    Eigen::VectorXd v(d);
    for (int j = 0; j < d; ++j) {
      w[j] = nd(rng);
      v[j] = nd(rng);
    }
    const Eigen::MatrixXd r = r_kernel(w);
    audit.min_quadratic_form = std::min(audit.min_quadratic_form, v.dot(r * v));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
    double n = 0.0;
    for (double x : w) n += x * x;
    n = std::sqrt(n);
    // Expected spectrum: one 0 and d-1 copies of 1/|w|.
    for (int j = 0; j < d; ++j) {
      const double expected = j == 0 ? 0.0 : 1.0 / n;
      audit.max_eigenvalue_error = std::max(audit.max_eigenvalue_error, std::abs(es.eigenvalues()[j] - expected));
    }
  }
  return audit;
}

}  // namespace bosedyn
