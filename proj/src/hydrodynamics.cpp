// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "bosedyn/hydrodynamics.hpp"

#include <algorithm>
#include <cmath>

namespace bosedyn {

RealField density(const WaveFunction& psi) {
  RealField rho(psi.values.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = 0.5 * std::norm(psi.values[i]);
  return rho;
}

namespace {

std::vector<RealField> momentum_from_gradient(const WaveFunction& psi, const std::vector<ComplexField>& grad) {
  std::vector<RealField> p(grad.size(), RealField(psi.values.size()));
  for (std::size_t ax = 0; ax < grad.size(); ++ax)
    for (std::size_t i = 0; i < psi.values.size(); ++i) p[ax][i] = std::imag(std::conj(psi.values[i]) * grad[ax][i]);
  return p;
}

/// Sum over axes of d_axis f[axis], one inverse transform.
RealField divergence(const Spectral& sp, const std::vector<RealField>& f) {
  ComplexField acc(sp.size(), cplx{});
  ComplexField hat(sp.size());
  for (int ax = 0; ax < static_cast<int>(f.size()); ++ax) {
    const ComplexField in = to_complex(f[ax]);
    sp.forward(in.data(), hat.data());
    for (std::size_t n = 0; n < sp.size(); ++n)
      acc[n] += hat[n] * cplx(0.0, sp.derivative_wavenumber(sp.mode_index(n, ax), ax));
  }
  ComplexField out(sp.size());
  sp.inverse(acc.data(), out.data());
  return real_part(out);
}

}  // namespace

std::vector<RealField> momentum(const WaveFunction& psi) {
  return momentum_from_gradient(psi, Spectral::get(psi.grid).gradient(psi.values));
}

HydroFields hydro_fields(const WaveFunction& psi) { return {density(psi), momentum(psi), psi.t}; }

std::vector<RealField> stress(const WaveFunction& psi, int a, int b) {
  const int d = psi.grid.d;
  const Spectral& sp = Spectral::get(psi.grid);
  std::vector<RealField> sigma(static_cast<std::size_t>(d * d), RealField(psi.values.size()));
  for (int j = 0; j < d; ++j) {
    const ComplexField ga = sp.derivative(psi.values, a * d + j);
    for (int k = 0; k < d; ++k) {
      const ComplexField gb = sp.derivative(psi.values, b * d + k);
      for (std::size_t i = 0; i < ga.size(); ++i) sigma[j * d + k][i] = 2.0 * std::real(ga[i] * std::conj(gb[i]));
    }
  }
  return sigma;
}

int pair_count(int N) { return N * (N - 1) / 2; }

int pair_index(int N, int a, int b) {
  if (a == b || a < 0 || b < 0 || a >= N || b >= N) throw Error(ErrorCode::IndexOutOfRange, "invalid particle pair");
  if (a > b) std::swap(a, b);
  return a * N - a * (a + 1) / 2 + (b - a - 1);
}

const RealField& ForceData::weight(int a, int b) const { return w[pair_index(N, a, b)]; }

ForceData force_data(const Grid& grid, const PotentialSpec& spec) {
  ForceData fd;
  fd.N = grid.N;
  fd.d = grid.d;
  const RelativeLattice rl = make_relative_lattice(grid);
  RealField wtab(rl.size);
  for (std::size_t r = 0; r < rl.size; ++r) wtab[r] = spec.weight(rl.dist[r]);
  fd.w.assign(pair_count(grid.N), RealField(grid.sites));
  fd.Mvec.assign(grid.axes(), RealField(grid.sites, 0.0));
  for (std::size_t s = 0; s < grid.sites; ++s)
    for (int a = 0; a < grid.N; ++a)
      for (int b = a + 1; b < grid.N; ++b) {
        const std::size_t r = relative_index(grid, s, a, b);
        const double w = wtab[r];
        fd.w[pair_index(grid.N, a, b)][s] = w;
        for (int j = 0; j < grid.d; ++j) {
          const double u = rl.unit_of(r, j);
          fd.Mvec[a * grid.d + j][s] += w * u;
          fd.Mvec[b * grid.d + j][s] -= w * u;
        }
      }
  return fd;
}

std::vector<RealField> force_term(const WaveFunction& psi, const ForceData& forces) {
  const RealField rho = density(psi);
  std::vector<RealField> out(forces.Mvec.size(), RealField(rho.size()));
  for (std::size_t ax = 0; ax < out.size(); ++ax)
    for (std::size_t i = 0; i < rho.size(); ++i) out[ax][i] = kOrderedPairForceFactor * forces.Mvec[ax][i] * rho[i];
  return out;
}

namespace {

void require_interior(const Trajectory& traj, std::size_t i) {
  if (traj.snapshots.size() < 3 || i == 0 || i + 1 >= traj.snapshots.size())
    throw Error(ErrorCode::InsufficientSnapshots, "centered time difference needs snapshots i-1, i, i+1");
}

}  // namespace

LawResidual mass_residual(const Trajectory& traj, std::size_t i) {
  require_interior(traj, i);
  const WaveFunction& psi = traj.snapshots[i];
  const double dt2 = traj.snapshots[i + 1].t - traj.snapshots[i - 1].t;
  const RealField rp = density(traj.snapshots[i + 1]);
  const RealField rm = density(traj.snapshots[i - 1]);
  const RealField divp = divergence(Spectral::get(psi.grid), momentum(psi));
  LawResidual res;
  res.t = psi.t;
  for (std::size_t n = 0; n < rp.size(); ++n) {
    const double dtrho = (rp[n] - rm[n]) / dt2;
    res.scale = std::max(res.scale, std::abs(dtrho));
    res.sup = std::max(res.sup, std::abs(dtrho - divp[n]));
  }
  return res;
}

std::vector<RealField> stress_divergence(const WaveFunction& psi) {
  const Grid& g = psi.grid;
  const Spectral& sp = Spectral::get(g);
  const std::vector<ComplexField> grad = sp.gradient(psi.values);
  std::vector<RealField> out(static_cast<std::size_t>(g.axes()));
  ComplexField acc(sp.size()), hat(sp.size()), field(sp.size()), back(sp.size());
  for (int alpha = 0; alpha < g.axes(); ++alpha) {
    std::fill(acc.begin(), acc.end(), cplx{});
    for (int beta = 0; beta < g.axes(); ++beta) {
      for (std::size_t n = 0; n < sp.size(); ++n) field[n] = 2.0 * std::real(grad[alpha][n] * std::conj(grad[beta][n]));
      sp.forward(field.data(), hat.data());
      for (std::size_t n = 0; n < sp.size(); ++n)
        acc[n] += hat[n] * cplx(0.0, sp.derivative_wavenumber(sp.mode_index(n, beta), beta));
    }
    sp.inverse(acc.data(), back.data());
    out[alpha] = real_part(back);
  }
  return out;
}

std::vector<RealField> density_gradient_laplacian(const WaveFunction& psi) {
  const Grid& g = psi.grid;
  const Spectral& sp = Spectral::get(g);
  ComplexField rho_hat(sp.size());
  const ComplexField rho = to_complex(density(psi));
  sp.forward(rho.data(), rho_hat.data());
  RealField k2(sp.size(), 0.0);
  for (std::size_t n = 0; n < sp.size(); ++n)
    for (int ax = 0; ax < g.axes(); ++ax) k2[n] += std::pow(sp.wavenumber(sp.mode_index(n, ax), ax), 2);
  std::vector<RealField> out(static_cast<std::size_t>(g.axes()));
  ComplexField hat(sp.size()), back(sp.size());
  for (int alpha = 0; alpha < g.axes(); ++alpha) {
    for (std::size_t n = 0; n < sp.size(); ++n)
      hat[n] = rho_hat[n] * cplx(0.0, sp.derivative_wavenumber(sp.mode_index(n, alpha), alpha)) * (-k2[n]);
    sp.inverse(hat.data(), back.data());
    out[alpha] = real_part(back);
  }
  return out;
}

LawResidual momentum_residual(const Trajectory& traj, std::size_t i, const PotentialSpec& spec) {
  require_interior(traj, i);
  const WaveFunction& psi = traj.snapshots[i];
  const double dt2 = traj.snapshots[i + 1].t - traj.snapshots[i - 1].t;
  const std::vector<RealField> pp = momentum(traj.snapshots[i + 1]);
  const std::vector<RealField> pm = momentum(traj.snapshots[i - 1]);
  const std::vector<RealField> div_sigma = stress_divergence(psi);
  const std::vector<RealField> grad_lap = density_gradient_laplacian(psi);
  const std::vector<RealField> force = force_term(psi, force_data(psi.grid, spec));

  LawResidual res;
  res.t = psi.t;
  for (int alpha = 0; alpha < psi.grid.axes(); ++alpha)
    for (std::size_t n = 0; n < psi.values.size(); ++n) {
      const double dtp = (pp[alpha][n] - pm[alpha][n]) / dt2;
      res.scale = std::max(res.scale, std::abs(dtp));
      const double r = std::abs(dtp - div_sigma[alpha][n] + grad_lap[alpha][n] + force[alpha][n]);
      if (r > res.sup) {
        res.sup = r;
        res.worst_axis = alpha;
      }
    }
  return res;
}

}  // namespace bosedyn
