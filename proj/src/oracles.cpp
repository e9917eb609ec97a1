// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "bosedyn/oracles.hpp"

#include <cmath>

namespace bosedyn::oracle {

void check_budget(const Grid& grid) {
  if (grid.M > kMaxPoints || grid.N > kMaxParticles)
    throw Error(ErrorCode::BudgetExceeded, "reference loops need M <= 16 and N <= 3");
}

ComplexField derivative(const Grid& grid, const ComplexField& f, int axis) {
  const int M = grid.M;
  std::vector<cplx> dmat(static_cast<std::size_t>(M) * M, cplx{});
  for (int m = 0; m < M; ++m)
    for (int mp = 0; mp < M; ++mp) {
      cplx s = 0.0;
      for (int q = 0; q < M; ++q) {
        if (2 * q == M) continue;
        const int signed_q = q < M / 2 ? q : q - M;
        const double k = 2.0 * kPi * signed_q / grid.L;
        s += cplx(0.0, k) * std::polar(1.0, 2.0 * kPi * q * (m - mp) / M);
      }
      dmat[static_cast<std::size_t>(m) * M + mp] = s / static_cast<double>(M);
    }
  const std::size_t stride = grid.axis_stride(axis);
  ComplexField out(f.size(), cplx{});
  for (std::size_t s = 0; s < f.size(); ++s) {
    const int m = grid.index(s, axis);
    const std::size_t base = s - static_cast<std::size_t>(m) * stride;
    cplx acc = 0.0;
    for (int mp = 0; mp < M; ++mp) acc += dmat[static_cast<std::size_t>(m) * M + mp] * f[base + mp * stride];
    out[s] = acc;
  }
  return out;
}

double displacement(const Grid& grid, std::size_t site, int a, int b, int j) {
  const double dx = grid.coords[grid.index(site, a * grid.d + j)] - grid.coords[grid.index(site, b * grid.d + j)];
  return dx - grid.L * std::floor(dx / grid.L + 0.5);
}

namespace {

struct Vec {
  double c[3] = {0.0, 0.0, 0.0};
  double norm = 0.0;
};

Vec separation(const Grid& grid, std::size_t site, int a, int b) {
  Vec v;
  double n2 = 0.0;
  for (int j = 0; j < grid.d; ++j) {
    v.c[j] = displacement(grid, site, a, b, j);
    n2 += v.c[j] * v.c[j];
  }
  v.norm = std::sqrt(n2);
  return v;
}

/// Unit vector with the antipodal-component convention of the lattice tables.
Vec unit(const Grid& grid, const Vec& v) {
  Vec u;
  if (v.norm == 0.0) return u;
  for (int j = 0; j < grid.d; ++j)
    u.c[j] = std::abs(v.c[j] + 0.5 * grid.L) < 1e-9 * grid.L ? 0.0 : v.c[j] / v.norm;
  u.norm = 1.0;
  return u;
}

double dot(const Vec& x, const Vec& y) { return x.c[0] * y.c[0] + x.c[1] * y.c[1] + x.c[2] * y.c[2]; }

}  // namespace

double interaction_term(const WaveFunction& psi, const PotentialSpec& spec) {
  const Grid& g = psi.grid;
  check_budget(g);
  double acc = 0.0;
  for (std::size_t s = 0; s < g.sites; ++s) {
    const double rho = 0.5 * std::norm(psi.values[s]);
    for (int a = 0; a < g.N; ++a)
      for (int b = 0; b < g.N; ++b) {
        if (a == b) continue;
        for (int c = 0; c < g.N; ++c) {
          const Vec ca = separation(g, s, c, a), ba = separation(g, s, b, a);
          const Vec cb = separation(g, s, c, b), ab = separation(g, s, a, b);
          acc += spec.weight(ca.norm) * dot(unit(g, ca), unit(g, ba)) * rho;
          acc += spec.weight(cb.norm) * dot(unit(g, cb), unit(g, ab)) * rho;
        }
      }
  }
  return acc * g.cell_volume();
}

double sigma_term(const WaveFunction& psi) {
  const Grid& g = psi.grid;
  check_budget(g);
  const int d = g.d;
  std::vector<ComplexField> grad;
  for (int ax = 0; ax < g.axes(); ++ax) grad.push_back(derivative(g, psi.values, ax));
  auto sigma = [&](std::size_t s, int x, int j, int y, int k) {
    return 2.0 * std::real(grad[x * d + j][s] * std::conj(grad[y * d + k][s]));
  };
  double acc = 0.0;
  for (std::size_t s = 0; s < g.sites; ++s)
    for (int a = 0; a < g.N; ++a)
      for (int b = 0; b < g.N; ++b) {
        if (a == b) continue;
        const Vec r = separation(g, s, a, b);
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) {
            // Hessian of |x_a - x_b| in slot a.
            double H = 0.0;
            if (d == 1) {
              H = r.norm == 0.0 ? 2.0 / g.h : 0.0;
            } else if (r.norm > 0.0) {
              H = ((j == k ? 1.0 : 0.0) - r.c[j] * r.c[k] / (r.norm * r.norm)) / r.norm;
            }
            if (H == 0.0) continue;
            acc += H * sigma(s, a, j, a, k);
            acc -= H * sigma(s, a, j, b, k);
            acc -= H * sigma(s, b, j, a, k);
            acc += H * sigma(s, b, j, b, k);
          }
      }
  return acc * g.cell_volume();
}

double correlation_C(const WaveFunction& psi) {
  const Grid& g = psi.grid;
  check_budget(g);
  double acc = 0.0;
  for (int a = 0; a < g.N; ++a)
    for (int b = a + 1; b < g.N; ++b)
      for (std::size_t s = 0; s < g.sites; ++s) {
        const double rho = 0.5 * std::norm(psi.values[s]);
        for (std::size_t sp = 0; sp < g.sites; ++sp) {
          double n2 = 0.0;
          for (int j = 0; j < g.d; ++j) {
            const double dx = displacement(g, s, a, b, j) - displacement(g, sp, a, b, j);
            const double w = dx - g.L * std::floor(dx / g.L + 0.5);
            n2 += w * w;
          }
          acc += rho * 0.5 * std::norm(psi.values[sp]) * std::sqrt(n2 / 2.0);
        }
      }
  return acc * g.cell_volume() * g.cell_volume();
}

namespace {

std::size_t slot_sites(const Grid& g) {
  std::size_t q = 1;
  for (int j = 0; j < g.d; ++j) q *= static_cast<std::size_t>(g.M);
  return q;
}

/// Minimal-image distance between single-slot sites x and y.
double slot_distance(const Grid& g, std::size_t x, std::size_t y) {
  double n2 = 0.0;
  for (int j = g.d - 1; j >= 0; --j) {
    const double dx = g.coords[x % g.M] - g.coords[y % g.M];
    const double w = dx - g.L * std::floor(dx / g.L + 0.5);
    n2 += w * w;
    x /= g.M;
    y /= g.M;
  }
  return std::sqrt(n2);
}

}  // namespace

Marginal marginal(const WaveFunction& psi, int k) {
  const Grid& g = psi.grid;
  check_budget(g);
  if (k < 1 || k >= g.N) throw Error(ErrorCode::InvalidArgument, "marginal order must satisfy 1 <= k < N");
  const std::size_t q = slot_sites(g);
  std::size_t n = 1, m = 1;
  for (int a = 0; a < k; ++a) n *= q;
  for (int a = k; a < g.N; ++a) m *= q;
  Marginal out;
  out.k = k;
  out.d = g.d;
  out.M = g.M;
  out.L = g.L;
  out.t = psi.t;
  out.values = KernelMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double w = std::pow(g.h, g.d * (g.N - k));
  for (std::size_t X = 0; X < n; ++X)
    for (std::size_t Xp = 0; Xp < n; ++Xp) {
      cplx s = 0.0;
      for (std::size_t Y = 0; Y < m; ++Y) s += psi.values[X * m + Y] * std::conj(psi.values[Xp * m + Y]);
      out.values(static_cast<Eigen::Index>(X), static_cast<Eigen::Index>(Xp)) = s * w;
    }
  return out;
}

Marginal collision_apply(const WaveFunction& psi, const PotentialSpec& spec) {
  const Grid& g = psi.grid;
  check_budget(g);
  if (g.N < 2) throw Error(ErrorCode::InvalidArgument, "collision needs N >= 2");
  const std::size_t q = slot_sites(g);
  std::size_t m = 1;
  for (int a = 2; a < g.N; ++a) m *= q;
  Marginal out;
  out.k = 1;
  out.d = g.d;
  out.M = g.M;
  out.L = g.L;
  out.t = psi.t;
  out.values = KernelMatrix::Zero(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
  const double w = std::pow(g.h, g.d * (g.N - 1)) * (g.N - 1);
  for (std::size_t x = 0; x < q; ++x)
    for (std::size_t xp = 0; xp < q; ++xp) {
      cplx s = 0.0;
      for (std::size_t y = 0; y < q; ++y) {
        const double dv = spec.V(slot_distance(g, x, y)) - spec.V(slot_distance(g, xp, y));
        for (std::size_t Z = 0; Z < m; ++Z)
          s += dv * psi.values[(x * q + y) * m + Z] * std::conj(psi.values[(xp * q + y) * m + Z]);
      }
      out.values(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(xp)) = s * w;
    }
  return out;
}

}  // namespace bosedyn::oracle
