// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "bosedyn/morawetz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bosedyn {

namespace {

void check_pair(const Grid& grid, int a, int b) {
  if (a == b || a < 0 || b < 0 || a >= grid.N || b >= grid.N)
    throw Error(ErrorCode::IndexOutOfRange, "pair (" + std::to_string(a) + "," + std::to_string(b) + ") is invalid");
}

int shift_of(const LatticeShift& shift, int j) { return shift.empty() ? 0 : shift[j]; }

void check_shift(const Grid& grid, const LatticeShift& shift) {
  if (!shift.empty() && static_cast<int>(shift.size()) != grid.d)
    throw Error(ErrorCode::InvalidArgument, "lattice shift must have d components");
}

/// Relative-lattice index of x_a - x_b - shift at `site`.
std::size_t shifted_index(const Grid& grid, std::size_t site, int a, int b, const LatticeShift& shift) {
  std::size_t r = 0;
  for (int j = 0; j < grid.d; ++j) {
    int diff = (grid.index(site, a * grid.d + j) - grid.index(site, b * grid.d + j) - shift_of(shift, j)) % grid.M;
    if (diff < 0) diff += grid.M;
    r = r * grid.M + static_cast<std::size_t>(diff);
  }
  return r;
}

double integrate(const RealField& f, const Grid& g) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * g.cell_volume();
}

}  // namespace

double collapsed_mass(const WaveFunction& psi, int a, int b, const LatticeShift& shift) {
  const Grid& g = psi.grid;
  check_pair(g, a, b);
  check_shift(g, shift);
  double s = 0.0;
  for (std::size_t site = 0; site < g.sites; ++site)
    if (shifted_index(g, site, a, b, shift) == 0) s += 0.5 * std::norm(psi.values[site]);
  return s * std::pow(g.h, g.d * (g.N - 1));
}

std::vector<RealField> contraction_Y(const Grid& grid, int a, int b, const LatticeShift& shift) {
  check_pair(grid, a, b);
  check_shift(grid, shift);
  const RelativeLattice rl = make_relative_lattice(grid);
  std::vector<RealField> Y(static_cast<std::size_t>(grid.axes()), RealField(grid.sites, 0.0));
  for (std::size_t s = 0; s < grid.sites; ++s) {
    const std::size_t r = shifted_index(grid, s, a, b, shift);
    for (int j = 0; j < grid.d; ++j) {
      Y[a * grid.d + j][s] = rl.unit_of(r, j);
      Y[b * grid.d + j][s] = -rl.unit_of(r, j);
    }
  }
  return Y;
}

std::vector<RealField> contraction_Y_total(const Grid& grid, const LatticeShift& shift) {
  check_shift(grid, shift);
  const RelativeLattice rl = make_relative_lattice(grid);
  std::vector<RealField> Y(static_cast<std::size_t>(grid.axes()), RealField(grid.sites, 0.0));
  for (std::size_t s = 0; s < grid.sites; ++s)
    for (int a = 0; a < grid.N; ++a)
      for (int b = 0; b < grid.N; ++b) {
        if (a == b) continue;
        const std::size_t r = shifted_index(grid, s, a, b, shift);
        for (int j = 0; j < grid.d; ++j) {
          Y[a * grid.d + j][s] += rl.unit_of(r, j);
          Y[b * grid.d + j][s] -= rl.unit_of(r, j);
        }
      }
  return Y;
}

RealField div_Y(const Grid& grid, int a, int b) {
  check_pair(grid, a, b);
  const RelativeLattice rl = make_relative_lattice(grid);
  RealField table(rl.size, 0.0);
  for (std::size_t r = 0; r < rl.size; ++r) {
    if (grid.d == 1) {
      const int o = rl.offset_of(r, 0);
      if (o == 0) table[r] = 4.0 / grid.h;
      if (2 * o == -grid.M) table[r] = -4.0 / grid.h;
    } else if (rl.dist[r] > 0.0) {
      table[r] = 2.0 * (grid.d - 1) / rl.dist[r];
    }
  }
  RealField out(grid.sites);
  for (std::size_t s = 0; s < grid.sites; ++s) out[s] = table[relative_index(grid, s, a, b)];
  return out;
}

double collapse_constant(int d) {
  if (d == 1) return 4.0;
  if (d == 3) return 32.0 * kPi;
  return std::numeric_limits<double>::quiet_NaN();
}

double interaction_term(const WaveFunction& psi, const ForceData& forces) {
  const Grid& g = psi.grid;
  const RelativeLattice rl = make_relative_lattice(g);
  double acc = 0.0;
  for (std::size_t s = 0; s < g.sites; ++s) {
    const double rho = 0.5 * std::norm(psi.values[s]);
    double local = 0.0;
    for (int a = 0; a < g.N; ++a)
      for (int b = 0; b < g.N; ++b) {
        if (a == b) continue;
        const std::size_t r = relative_index(g, s, a, b);
        for (int j = 0; j < g.d; ++j) local += forces.Mvec[a * g.d + j][s] * rl.unit_of(r, j);
      }
    acc += 2.0 * local * rho;
  }
  return acc * g.cell_volume();
}

double interaction_term(const WaveFunction& psi, const PotentialSpec& spec) {
  return interaction_term(psi, force_data(psi.grid, spec));
}

double sigma_term(const WaveFunction& psi) {
  const Grid& g = psi.grid;
  const int d = g.d;
  const Spectral& sp = Spectral::get(g);
  const std::vector<ComplexField> grad = sp.gradient(psi.values);
  const RelativeLattice rl = make_relative_lattice(g);
  double acc = 0.0;
  std::vector<cplx> D(static_cast<std::size_t>(d));
  for (std::size_t s = 0; s < g.sites; ++s)
    for (int a = 0; a < g.N; ++a)
      for (int b = 0; b < g.N; ++b) {
        if (a == b) continue;
        const std::size_t r = relative_index(g, s, a, b);
        for (int j = 0; j < d; ++j) D[j] = grad[a * d + j][s] - grad[b * d + j][s];
        if (d == 1) {
          if (rl.offset_of(r, 0) == 0) acc += 2.0 * (2.0 / g.h) * std::norm(D[0]);
          continue;
        }
        const double dist = rl.dist[r];
        if (dist == 0.0) continue;
        // (D psi)^dagger (I - w w^T/|w|^2) (D psi) / |w|
        double dn = 0.0;
        cplx wd = 0.0;
        for (int j = 0; j < d; ++j) {
          dn += std::norm(D[j]);
          wd += rl.offset_of(r, j) * g.h / dist * D[j];
        }
        acc += 2.0 * (dn - std::norm(wd)) / dist;
      }
  return acc * g.cell_volume();
}

WeakTerms weak_terms(const WaveFunction& psi, const ForceData& forces, const LatticeShift& shift) {
  const Grid& g = psi.grid;
  const std::vector<RealField> Y = contraction_Y_total(g, shift);
  const std::vector<RealField> div_sigma = stress_divergence(psi);
  const std::vector<RealField> grad_lap = density_gradient_laplacian(psi);
  const std::vector<RealField> force = force_term(psi, forces);
  const std::vector<RealField> p = momentum(psi);
  WeakTerms w;
  for (int ax = 0; ax < g.axes(); ++ax)
    for (std::size_t s = 0; s < g.sites; ++s) {
      w.sigma -= Y[ax][s] * div_sigma[ax][s];
      w.kinetic += Y[ax][s] * grad_lap[ax][s];
      w.interaction += Y[ax][s] * force[ax][s];
      w.boundary += Y[ax][s] * p[ax][s];
    }
  const double vol = g.cell_volume();
  w.sigma *= vol;
  w.kinetic *= vol;
  w.interaction *= vol;
  w.boundary *= vol;
  return w;
}

double variance_functional(const WaveFunction& psi, const LatticeShift& shift) {
  const Grid& g = psi.grid;
  check_shift(g, shift);
  const RelativeLattice rl = make_relative_lattice(g);
  RealField f(g.sites);
  for (std::size_t s = 0; s < g.sites; ++s) {
    double D = 0.0;
    for (int a = 0; a < g.N; ++a)
      for (int b = 0; b < g.N; ++b)
        if (a != b) D += rl.dist[shifted_index(g, s, a, b, shift)];
    f[s] = 0.5 * std::norm(psi.values[s]) * D;
  }
  return integrate(f, g);
}

double trapezoid(const std::vector<double>& values, double dt) {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * dt;
}

PositivitySeries variance_series(const Trajectory& traj, const PotentialSpec& spec, const LatticeShift& shift) {
  if (traj.snapshots.empty()) throw Error(ErrorCode::InsufficientSnapshots, "trajectory holds no snapshots");
  const Grid& g = traj.snapshots.front().grid;
  check_shift(g, shift);
  const ForceData forces = force_data(g, spec);
  PositivitySeries series;
  for (const WaveFunction& psi : traj.snapshots) {
    MorawetzSample ms;
    ms.t = psi.t;
    for (int a = 0; a < g.N; ++a)
      for (int b = 0; b < g.N; ++b)
        if (a != b) ms.m.push_back(collapsed_mass(psi, a, b, shift));
    ms.interaction = interaction_term(psi, forces);
    ms.sigma = sigma_term(psi);
    ms.weak = weak_terms(psi, forces, shift);
    ms.variance = variance_functional(psi, shift);
    ms.l2 = l2_norm(psi);
    ms.h1 = h1_norm(psi);
    double grad_sum = 0.0;
    for (int a = 0; a < g.N; ++a) grad_sum += std::sqrt(slot_gradient_norm_sq(psi, a));
    ms.boundary_bound = ms.l2 * 2.0 * (g.N - 1) * grad_sum;
    series.samples.push_back(std::move(ms));
  }
  const double dt = traj.sample_dt();
  for (std::size_t i = 1; i + 1 < series.samples.size(); ++i)
    series.variance_second_difference.push_back(
        (series.samples[i + 1].variance - 2.0 * series.samples[i].variance + series.samples[i - 1].variance) /
        (dt * dt));
  return series;
}

BalanceReport estimate_balance(const Trajectory& traj, const PotentialSpec& spec, const LatticeShift& shift) {
  BalanceReport rep;
  rep.series = variance_series(traj, spec, shift);
  rep.shift = shift;
  const auto& smp = rep.series.samples;
  const Grid& g = traj.snapshots.front().grid;
  const double dt = traj.sample_dt();
  rep.c_d = collapse_constant(g.d);

  std::vector<double> sig, kin, inter, mtot;
  const std::size_t npairs = smp.front().m.size();
  std::vector<std::vector<double>> per_pair(npairs);
  for (const auto& s : smp) {
    sig.push_back(s.weak.sigma);
    kin.push_back(s.weak.kinetic);
    inter.push_back(s.weak.interaction);
    double m = 0.0;
    for (std::size_t k = 0; k < npairs; ++k) {
      m += s.m[k];
      per_pair[k].push_back(s.m[k]);
    }
    mtot.push_back(m);
  }
  rep.integral_sigma = trapezoid(sig, dt);
  rep.integral_kinetic = trapezoid(kin, dt);
  rep.integral_interaction = trapezoid(inter, dt);
  rep.boundary_difference = smp.front().weak.boundary - smp.back().weak.boundary;
  rep.balance_residual =
      std::abs(rep.integral_sigma + rep.integral_kinetic + rep.integral_interaction - rep.boundary_difference);
  rep.collapsed_total = trapezoid(mtot, dt);
  rep.collapsed_scaled = rep.c_d * rep.collapsed_total;

  const double h1_0 = smp.front().h1, l2_0 = smp.front().l2;
  rep.collapsed_bound = static_cast<double>(g.N) * g.N * h1_0 * l2_0;
  rep.inequality_margin = rep.collapsed_bound - rep.collapsed_total;
  rep.pair_margin_min = std::numeric_limits<double>::infinity();
  for (const auto& series : per_pair) rep.pair_margin_min = std::min(rep.pair_margin_min, h1_0 * l2_0 - trapezoid(series, dt));

  rep.interaction_min = rep.sigma_min = rep.boundary_margin_min = std::numeric_limits<double>::infinity();
  for (const auto& s : smp) {
    const double scale = s.h1 * s.h1;
    rep.interaction_min = std::min(rep.interaction_min, s.interaction / scale);
    rep.sigma_min = std::min(rep.sigma_min, s.sigma / scale);
    rep.boundary_margin_min = std::min(rep.boundary_margin_min, s.boundary_bound - std::abs(s.weak.boundary));
  }
  rep.convexity_min = std::numeric_limits<double>::infinity();
  for (double v : rep.series.variance_second_difference)
    rep.convexity_min = std::min(rep.convexity_min, v / (h1_0 * h1_0));
  if (rep.series.variance_second_difference.empty()) rep.convexity_min = 0.0;
  return rep;
}

}  // namespace bosedyn
