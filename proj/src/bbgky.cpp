// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "bosedyn/bbgky.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>

#include "bosedyn/hydrodynamics.hpp"

namespace bosedyn {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

/// Flat single-slot index of x - y (componentwise mod M).
std::size_t slot_difference(std::size_t x, std::size_t y, int d, int M) {
  std::size_t r = 0, stride = 1;
  for (int j = 0; j < d; ++j) {
    const int xj = static_cast<int>(x % M), yj = static_cast<int>(y % M);
    x /= M;
    y /= M;
    r += static_cast<std::size_t>((xj - yj + M) % M) * stride;
    stride *= static_cast<std::size_t>(M);
  }
  return r;
}

/// Table T[x * q + y] = V(|x - y|) over single-slot sites.
RealField pair_table(const PotentialSpec& spec, int d, int M, double L) {
  const RelativeLattice rl = make_relative_lattice(make_grid(d, 1, M, L));
  const std::size_t q = rl.size;
  RealField vr(q);
  for (std::size_t r = 0; r < q; ++r) vr[r] = spec.V(rl.dist[r]);
  RealField table(q * q);
  for (std::size_t x = 0; x < q; ++x)
    for (std::size_t y = 0; y < q; ++y) table[x * q + y] = vr[slot_difference(x, y, d, M)];
  return table;
}

double max_abs(const KernelMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Marginal like(const Marginal& ref, int k) {
  Marginal out;
  out.k = k;
  out.d = ref.d;
  out.M = ref.M;
  out.L = ref.L;
  out.t = ref.t;
  const auto n = static_cast<Eigen::Index>(ipow(ref.M, ref.d * k));
  out.values = KernelMatrix::Zero(n, n);
  return out;
}

}  // namespace

cplx Marginal::trace() const { return values.trace() * std::pow(h(), d * k); }

Marginal marginal(const WaveFunction& psi, int k, std::size_t cap) {
  const Grid& g = psi.grid;
  if (k < 1 || k > g.N) throw Error(ErrorCode::InvalidArgument, "marginal order must satisfy 1 <= k <= N");
  const std::size_t n = ipow(g.M, g.d * k), m = ipow(g.M, g.d * (g.N - k));
  if (n > cap / n) throw Error(ErrorCode::MemoryCapExceeded, "marginal tensor exceeds the memory cap");
  const Eigen::Map<const KernelMatrix> A(psi.values.data(), static_cast<Eigen::Index>(n),
                                         static_cast<Eigen::Index>(m));
  Marginal out;
  out.k = k;
  out.d = g.d;
  out.M = g.M;
  out.L = g.L;
  out.t = psi.t;
  out.values = (A * A.adjoint()) * std::pow(g.h, g.d * (g.N - k));
  return out;
}

Marginal partial_trace(const Marginal& gamma) {
  if (gamma.k < 2) throw Error(ErrorCode::InvalidArgument, "partial trace needs k >= 2");
  Marginal out = like(gamma, gamma.k - 1);
  const auto n = out.values.rows();
  const auto q = static_cast<Eigen::Index>(ipow(gamma.M, gamma.d));
  const double hd = std::pow(gamma.h(), gamma.d);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index xp = 0; xp < n; ++xp) {
      cplx s = 0.0;
      for (Eigen::Index y = 0; y < q; ++y) s += gamma.values(x * q + y, xp * q + y);
      out.values(x, xp) = s * hd;
    }
  return out;
}

MarginalReport check_marginal(const Marginal& gamma, double norm_sq, const Marginal* lower) {
  MarginalReport rep;
  const double scale = max_abs(gamma.values);
  if (scale > 0.0) rep.hermiticity = max_abs(gamma.values - gamma.values.adjoint()) / scale;
  rep.trace_error = std::abs(gamma.trace() - norm_sq);
  if (gamma.k == 1) {
    const Eigen::MatrixXcd herm = 0.5 * (gamma.values + gamma.values.adjoint()) * std::pow(gamma.h(), gamma.d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    rep.psd_min_eig = es.eigenvalues().minCoeff();
  }
  if (gamma.k == 2 && scale > 0.0) {
    const auto q = static_cast<Eigen::Index>(ipow(gamma.M, gamma.d));
    auto swap = [q](Eigen::Index X) { return (X % q) * q + X / q; };
    double dev = 0.0;
    for (Eigen::Index X = 0; X < gamma.values.rows(); ++X)
      for (Eigen::Index Xp = 0; Xp < gamma.values.cols(); ++Xp)
        dev = std::max(dev, std::abs(gamma.values(X, Xp) - gamma.values(swap(X), swap(Xp))));
    rep.bose_symmetry = dev / scale;
  }
  if (lower) {
    if (lower->k + 1 != gamma.k || lower->M != gamma.M || lower->d != gamma.d)
      throw Error(ErrorCode::GridMismatch, "compatibility needs gamma_{k-1} on the same grid");
    const double ls = max_abs(lower->values);
    rep.compatibility = max_abs(partial_trace(gamma).values - lower->values) / (ls > 0.0 ? ls : 1.0);
  }
  return rep;
}

Marginal collision_apply(const Marginal& gamma_next, const PotentialSpec& spec, int N) {
  const int k = gamma_next.k - 1;
  if (k < 1 || gamma_next.k > N) throw Error(ErrorCode::InvalidArgument, "collision needs gamma_{k+1} with 1 <= k < N");
  Marginal out = like(gamma_next, k);
  const int d = gamma_next.d, M = gamma_next.M;
  const std::size_t q = ipow(M, d);
  const RealField table = pair_table(spec, d, M, gamma_next.L);
  const double hd = std::pow(gamma_next.h(), d);
  const auto n = out.values.rows();
  std::vector<std::size_t> digit(static_cast<std::size_t>(n) * k);
  for (Eigen::Index X = 0; X < n; ++X) {
    std::size_t rest = static_cast<std::size_t>(X);
    for (int a = k - 1; a >= 0; --a) {
      digit[static_cast<std::size_t>(X) * k + a] = rest % q;
      rest /= q;
    }
  }
  const auto qi = static_cast<Eigen::Index>(q);
  for (Eigen::Index X = 0; X < n; ++X)
    for (Eigen::Index Xp = 0; Xp < n; ++Xp) {
      cplx s = 0.0;
      for (Eigen::Index y = 0; y < qi; ++y) {
        double w = 0.0;
        for (int a = 0; a < k; ++a)
          w += table[digit[X * k + a] * q + y] - table[digit[Xp * k + a] * q + y];
        if (w != 0.0) s += w * gamma_next.values(X * qi + y, Xp * qi + y);
      }
      out.values(X, Xp) = s * hd * static_cast<double>(N - k);
    }
  return out;
}

HierarchyResidual hierarchy_residual_k1(const Trajectory& traj, std::size_t i, const PotentialSpec& spec) {
  if (i == 0 || i + 1 >= traj.snapshots.size())
    throw Error(ErrorCode::InsufficientSnapshots, "hierarchy residual needs snapshots i-1, i, i+1");
  const WaveFunction& mid = traj.snapshots[i];
  const Grid& g = mid.grid;
  if (g.N < 2) throw Error(ErrorCode::InvalidArgument, "hierarchy residual needs N >= 2");
  const double dt = traj.sample_dt();
  const Marginal gp = marginal(traj.snapshots[i + 1], 1), gm = marginal(traj.snapshots[i - 1], 1);
  const Marginal g1 = marginal(mid, 1);
  const Marginal coll = collision_apply(marginal(mid, 2), spec, g.N);

  // (Lap_x - Lap_x') gamma_1 on the 2d-axis grid (x digits, then x' digits).
  const Spectral& sp = Spectral::get(std::vector<int>(static_cast<std::size_t>(2 * g.d), g.M), g.L);
  ComplexField flat(g1.values.data(), g1.values.data() + g1.values.size()), hat(flat.size());
  sp.forward(flat.data(), hat.data());
  for (std::size_t n = 0; n < hat.size(); ++n) {
    double k2 = 0.0;
    for (int j = 0; j < g.d; ++j) {
      const double kx = sp.wavenumber(sp.mode_index(n, j), j);
      const double kp = sp.wavenumber(sp.mode_index(n, g.d + j), g.d + j);
      k2 += -kx * kx + kp * kp;
    }
    hat[n] *= k2;
  }
  sp.inverse(hat.data(), flat.data());
  const Eigen::Map<const KernelMatrix> lap(flat.data(), g1.values.rows(), g1.values.cols());

  const KernelMatrix idt = cplx(0.0, 1.0) * (gp.values - gm.values) / (2.0 * dt);
  const KernelMatrix R = idt - lap + kOrderedPairForceFactor * coll.values;
  HierarchyResidual res;
  res.sup = max_abs(R);
  res.scale = max_abs(idt);
  res.antihermitian_defect = max_abs(R + R.adjoint());
  res.t = mid.t;
  return res;
}

Marginal b2_collapse(const Marginal& gamma2, double g) {
  if (gamma2.k != 2) throw Error(ErrorCode::InvalidArgument, "collapse needs gamma_2");
  Marginal out = like(gamma2, 1);
  const auto q = out.values.rows();
  for (Eigen::Index x = 0; x < q; ++x)
    for (Eigen::Index xp = 0; xp < q; ++xp)
      out.values(x, xp) = g * (gamma2.values(x * q + x, xp * q + x) - gamma2.values(x * q + xp, xp * q + xp));
  return out;
}

double b2_norm(const Marginal& B) {
  if (B.k != 1) throw Error(ErrorCode::InvalidArgument, "mixed norm needs a one-particle kernel");
  const auto q = static_cast<std::size_t>(B.values.rows());
  const double hd = std::pow(B.h(), B.d);
  double acc = 0.0;
  for (std::size_t delta = 0; delta < q; ++delta) {
    double l1 = 0.0;
    for (std::size_t x = 0; x < q; ++x)
      l1 += std::abs(B.values(static_cast<Eigen::Index>(x),
                              static_cast<Eigen::Index>(slot_difference(x, delta, B.d, B.M))));
    acc += l1 * hd * l1 * hd;
  }
  return std::sqrt(std::pow(2.0, 0.5 * B.d) * acc * hd);
}

namespace {

struct PairDensity {
  RealField rho2;  ///< rho_2(x, y) = gamma_2(x, y | x, y), row-major
  double mass = 0.0;
  double diagonal = 0.0;  ///< int rho_2(x, x) dx
  double sup_line = 0.0;  ///< sup_delta int rho_2(x, x + delta) dx
};

PairDensity pair_density(const Marginal& gamma2) {
  const auto q = static_cast<std::size_t>(ipow(gamma2.M, gamma2.d));
  const double hd = std::pow(gamma2.h(), gamma2.d);
  PairDensity pd;
  pd.rho2.resize(q * q);
  for (std::size_t x = 0; x < q; ++x)
    for (std::size_t y = 0; y < q; ++y) {
      const auto X = static_cast<Eigen::Index>(x * q + y);
      pd.rho2[x * q + y] = gamma2.values(X, X).real();
      pd.mass += pd.rho2[x * q + y] * hd * hd;
    }
  for (std::size_t x = 0; x < q; ++x) pd.diagonal += pd.rho2[x * q + x] * hd;
  for (std::size_t delta = 0; delta < q; ++delta) {
    double s = 0.0;
    for (std::size_t x = 0; x < q; ++x) s += pd.rho2[x * q + slot_difference(x, delta, gamma2.d, gamma2.M)] * hd;
    pd.sup_line = std::max(pd.sup_line, s);
  }
  return pd;
}

B2Bound finish(double norm, double bound, double reference_form) {
  B2Bound b;
  b.norm = norm;
  b.bound = bound;
  b.margin = bound - norm;
  b.reference_form = reference_form;
  b.ratio = reference_form > 0.0 ? norm / reference_form : 0.0;
  return b;
}

}  // namespace

B2Bound finite_n_b2(const Marginal& gamma2, const PotentialSpec& spec, int N) {
  Marginal B = collision_apply(gamma2, spec, N);
  B.values *= kOrderedPairForceFactor;
  const PairDensity pd = pair_density(gamma2);
  const auto q = static_cast<std::size_t>(ipow(gamma2.M, gamma2.d));
  const double hd = std::pow(gamma2.h(), gamma2.d);
  const RealField table = pair_table(spec, gamma2.d, gamma2.M, gamma2.L);
  double v1 = 0.0, ev = 0.0;
  for (std::size_t y = 0; y < q; ++y) v1 += std::abs(table[y]) * hd;
  for (std::size_t n = 0; n < q * q; ++n) ev += std::abs(table[n]) * pd.rho2[n] * hd * hd;
  const double bound = std::pow(2.0, 0.25 * gamma2.d) * 2.0 * kOrderedPairForceFactor * (N - 1) *
                       std::sqrt(ev * v1 * pd.mass);
  return finish(b2_norm(B), bound, v1 * pd.sup_line);
}

B2Bound limit_b2(const Marginal& gamma2, double g) {
  const PairDensity pd = pair_density(gamma2);
  const double bound = std::pow(2.0, 0.25 * gamma2.d) * 2.0 * std::abs(g) * std::sqrt(pd.mass * pd.diagonal);
  return finish(b2_norm(b2_collapse(gamma2, g)), bound, pd.diagonal);
}

// ---------------------------------------------------------------- transport

namespace {

/// Phase e^{-2 pi i v . y0} linking the lattice DFT to coordinates starting at y0 = -L/2.
cplx origin_phase(const Spectral& sp, std::size_t n, int d, double y0, double sign) {
  double arg = 0.0;
  for (int j = 0; j < d; ++j) arg += sp.wavenumber(sp.mode_index(n, j), j) * y0;
  return std::polar(1.0, -sign * arg);
}

void check_same_grid(const TransportField& a, const TransportField& b) {
  if (a.d != b.d || a.M != b.M || a.L != b.L || a.values.size() != b.values.size())
    throw Error(ErrorCode::GridMismatch, "forcing samples must share one grid");
}

/// ||B||^2_{L^2_z(L^1_y)} from its transform.
double forcing_norm_sq(const TransportField& f) {
  const Spectral& sp = Spectral::get(std::vector<int>(static_cast<std::size_t>(f.d), f.M), f.L);
  const std::size_t q = sp.size();
  const double h = f.L / f.M, hd = std::pow(h, f.d), y0 = -0.5 * f.L;
  std::vector<double> l1(q, 0.0);
  ComplexField col(q), back(q);
  for (std::size_t z = 0; z < q; ++z) {
    for (std::size_t v = 0; v < q; ++v) col[v] = f.values[v * q + z] * origin_phase(sp, v, f.d, y0, -1.0);
    sp.inverse(col.data(), back.data());
    for (std::size_t y = 0; y < q; ++y) l1[z] += std::abs(back[y]);  // |B| / h^d times h^d
  }
  double acc = 0.0;
  for (double v : l1) acc += v * v;
  return acc * hd;
}

}  // namespace

TransportField transport_transform(const Marginal& B) {
  if (B.k != 1) throw Error(ErrorCode::InvalidArgument, "transport forcing must be a one-particle kernel");
  const Spectral& sp = Spectral::get(std::vector<int>(static_cast<std::size_t>(B.d), B.M), B.L);
  const std::size_t q = sp.size();
  const double hd = std::pow(B.h(), B.d), y0 = -0.5 * B.L;
  TransportField out{B.d, B.M, B.L, B.t, ComplexField(q * q)};
  ComplexField line(q), hat(q);
  for (std::size_t z = 0; z < q; ++z) {
    for (std::size_t y = 0; y < q; ++y) {
      std::size_t xs = 0, stride = 1, yr = y, zr = z;
      for (int j = 0; j < B.d; ++j) {
        xs += ((yr % B.M + zr % B.M) % B.M) * stride;
        yr /= B.M;
        zr /= B.M;
        stride *= static_cast<std::size_t>(B.M);
      }
      line[y] = B.values(static_cast<Eigen::Index>(xs), static_cast<Eigen::Index>(y));
    }
    sp.forward(line.data(), hat.data());
    for (std::size_t v = 0; v < q; ++v) out.values[v * q + z] = hat[v] * hd * origin_phase(sp, v, B.d, y0, 1.0);
  }
  return out;
}

TransportResult transport_solve(const std::vector<TransportField>& forcing, double T, double dt) {
  if (!(dt > 0.0) || T < 0.0) throw Error(ErrorCode::InvalidArgument, "need dt > 0 and T >= 0");
  const double steps = T / dt;
  const auto n_steps = static_cast<std::size_t>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(n_steps)) > 1e-9 * std::max(1.0, steps) ||
      forcing.size() != n_steps + 1)
    throw Error(ErrorCode::ForcingSampleGap, "need forcing samples at every multiple of dt in [0, T]");
  for (std::size_t j = 0; j < forcing.size(); ++j) {
    check_same_grid(forcing.front(), forcing[j]);
    if (std::abs(forcing[j].t - static_cast<double>(j) * dt) > 1e-9 * std::max(1.0, T))
      throw Error(ErrorCode::ForcingSampleGap, "forcing sample times must be j * dt");
  }
  const TransportField& f0 = forcing.front();
  const int d = f0.d;
  const Spectral& sp = Spectral::get(std::vector<int>(static_cast<std::size_t>(d), f0.M), f0.L);
  const std::size_t q = sp.size();
  const double hd = std::pow(f0.L / f0.M, d);

  TransportResult res;
  std::vector<ComplexField> cum(q, ComplexField(q, cplx{})), first(q);
  ComplexField zhat(q), shifted(q), out(q);
  std::vector<double> norms;
  for (std::size_t j = 0; j < forcing.size(); ++j) {
    const double s = static_cast<double>(j) * dt;
    TransportField field{d, f0.M, f0.L, s, ComplexField(q * q)};
    for (std::size_t v = 0; v < q; ++v) {
      sp.forward(&forcing[j].values[v * q], zhat.data());
      // Characteristic shift z -> z - 2 pi s v as a Fourier phase in z; the
      // dual wavenumber of v is 2 pi v, so the shift is s times it.
      for (std::size_t n = 0; n < q; ++n) {
        double arg = 0.0;
        for (int a = 0; a < d; ++a)
          arg += sp.wavenumber(sp.mode_index(n, a), a) * s * sp.wavenumber(sp.mode_index(v, a), a);
        shifted[n] = zhat[n] * std::polar(1.0, -arg);
      }
      if (j == 0) first[v] = shifted;
      for (std::size_t n = 0; n < q; ++n) out[n] = dt * (cum[v][n] + 0.5 * shifted[n] - 0.5 * first[v][n]);
      sp.inverse(out.data(), &field.values[v * q]);
      double l2 = 0.0;
      for (std::size_t z = 0; z < q; ++z) l2 += std::norm(field.values[v * q + z]);
      res.sup_norm_sq = std::max(res.sup_norm_sq, l2 * hd);
      for (std::size_t n = 0; n < q; ++n) cum[v][n] += shifted[n];
    }
    res.fields.push_back(std::move(field));
    norms.push_back(forcing_norm_sq(forcing[j]));
  }
  for (std::size_t j = 0; j + 1 < norms.size(); ++j) res.forcing_integral += 0.5 * dt * (norms[j] + norms[j + 1]);
  res.margin = res.forcing_integral - res.sup_norm_sq;
  res.margin_scaled = T * res.forcing_integral - res.sup_norm_sq;
  return res;
}

// ---------------------------------------------------------------- GP closure

double gp_mu(const WaveFunction& phi, double g) {
  double s = 0.0;
  for (cplx z : phi.values) s += std::norm(z) * std::norm(z);
  return 0.5 * g * s * phi.grid.cell_volume();
}

GPTrajectory gp_solve(const WaveFunction& phi0, double g, double T, double dt, int stride) {
  if (phi0.grid.N != 1) throw Error(ErrorCode::InvalidArgument, "GP field lives on a single-particle grid");
  if (!(dt > 0.0) || T < 0.0 || stride < 1) throw Error(ErrorCode::InvalidArgument, "need dt > 0, T >= 0, stride >= 1");
  const double steps = T / dt;
  const auto n_steps = static_cast<long long>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(n_steps)) > 1e-9 * std::max(1.0, steps) || n_steps % stride != 0)
    throw Error(ErrorCode::InvalidArgument, "T must be a multiple of stride * dt");

  const Spectral& sp = Spectral::get(phi0.grid);
  ComplexField kinetic(sp.size()), hat(sp.size());
  for (std::size_t n = 0; n < sp.size(); ++n) {
    double k2 = 0.0;
    for (int j = 0; j < phi0.grid.d; ++j) k2 += std::pow(sp.wavenumber(sp.mode_index(n, j), j), 2);
    kinetic[n] = std::polar(1.0, 0.5 * k2 * dt);
  }
  auto half_kinetic = [&](WaveFunction& phi) {
    sp.forward(phi.values.data(), hat.data());
    for (std::size_t n = 0; n < hat.size(); ++n) hat[n] *= kinetic[n];
    sp.inverse(hat.data(), phi.values.data());
  };

  GPTrajectory traj;
  traj.g = g;
  WaveFunction phi = phi0;
  auto record = [&]() {
    traj.snapshots.push_back(phi);
    traj.samples.push_back({phi.t, l2_norm(phi), gp_mu(phi, g)});
  };
  record();
  for (long long n = 1; n <= n_steps; ++n) {
    half_kinetic(phi);
    const double mu = gp_mu(phi, g);
    for (cplx& z : phi.values) z *= std::polar(1.0, (g * std::norm(z) - mu) * dt);
    half_kinetic(phi);
    phi.t = phi0.t + static_cast<double>(n) * dt;
    for (cplx z : phi.values)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error(ErrorCode::NonFiniteValues, "GP field became non-finite");
    if (n % stride == 0) record();
  }
  return traj;
}

// ---------------------------------------------------------------- mean field

MeanFieldDistance mean_field_distance(const Marginal& gamma1, const WaveFunction& phi) {
  const Grid& g = phi.grid;
  if (gamma1.k != 1 || g.N != 1 || g.d != gamma1.d || g.M != gamma1.M || g.L != gamma1.L)
    throw Error(ErrorCode::GridMismatch, "gamma_1 and phi must share the single-particle grid");
  const Eigen::Map<const Eigen::VectorXcd> v(phi.values.data(), static_cast<Eigen::Index>(phi.values.size()));
  const double hd = g.cell_volume();
  const Eigen::MatrixXcd diff = (gamma1.values - KernelMatrix(v * v.adjoint())) * hd;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  MeanFieldDistance out;
  out.hilbert_schmidt = diff.norm();
  out.trace_norm = es.eigenvalues().cwiseAbs().sum();
  return out;
}

double mean_field_coupling(const PotentialSpec& member, const Grid& grid) {
  return kOrderedPairForceFactor * (grid.N - 1) * lattice_integral(member, grid);
}

std::vector<TrendPoint> mean_field_trend(const PotentialSpec& base, const Orbital& phi0, const TrendOptions& opts) {
  std::vector<TrendPoint> trend;
  const Grid one = make_grid(opts.d, 1, opts.M, opts.L);
  const WaveFunction phi_init = product_state(one, phi0);
  const auto steps = static_cast<int>(std::llround(opts.T / opts.dt));
  for (int N : opts.particle_counts) {
    const Grid grid = make_grid(opts.d, N, opts.M, opts.L);
    const PotentialSpec member = ScaledFamily{base, N, opts.d}.member();
    EvolveOptions eo;
    eo.stride = std::max(steps, 1);
    Trajectory run = evolve(product_state(grid, phi0), member, opts.T, opts.dt, eo);
    const Marginal gamma1 = marginal(run.snapshots.back(), 1);
    TrendPoint pt;
    pt.N = N;
    pt.g = mean_field_coupling(member, grid);
    const GPTrajectory gp = gp_solve(phi_init, pt.g, opts.T, opts.dt, std::max(steps, 1));
    pt.t = gp.snapshots.back().t;
    pt.distance = mean_field_distance(gamma1, gp.snapshots.back());
    trend.push_back(pt);
  }
  return trend;
}

// ---------------------------------------------------------------- I/O

void write_marginal(const std::string& path, const Marginal& gamma) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path);
  const std::int64_t header_int[3] = {gamma.k, gamma.d, gamma.M};
  out.write(reinterpret_cast<const char*>(header_int), sizeof header_int);
  out.write(reinterpret_cast<const char*>(&gamma.L), sizeof gamma.L);
  out.write(reinterpret_cast<const char*>(gamma.values.data()),
            static_cast<std::streamsize>(gamma.values.size() * sizeof(cplx)));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

Marginal read_marginal(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::int64_t header_int[3];
  Marginal gamma;
  in.read(reinterpret_cast<char*>(header_int), sizeof header_int);
  in.read(reinterpret_cast<char*>(&gamma.L), sizeof gamma.L);
  if (!in) throw Error(ErrorCode::IoError, "truncated header in " + path);
  gamma.k = static_cast<int>(header_int[0]);
  gamma.d = static_cast<int>(header_int[1]);
  gamma.M = static_cast<int>(header_int[2]);
  if (gamma.k < 1 || gamma.d < 1 || gamma.d > 3 || gamma.M < 1 || ipow(gamma.M, gamma.d * gamma.k) > (1u << 16))
    throw Error(ErrorCode::ParseError, "implausible marginal header in " + path);
  const auto n = static_cast<Eigen::Index>(ipow(gamma.M, gamma.d * gamma.k));
  gamma.values.resize(n, n);
  in.read(reinterpret_cast<char*>(gamma.values.data()), static_cast<std::streamsize>(gamma.values.size() * sizeof(cplx)));
  if (!in) throw Error(ErrorCode::IoError, "truncated payload in " + path);
  return gamma;
}

}  // namespace bosedyn
