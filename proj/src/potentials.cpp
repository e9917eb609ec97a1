// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include "bosedyn/potentials.hpp"

#include <cmath>
#include <limits>

namespace bosedyn {

PotentialKind parse_potential_kind(const std::string& name) {
  if (name == "gaussian-core") return PotentialKind::GaussianCore;
  if (name == "soft-core") return PotentialKind::SoftCore;
  if (name == "inverse-quadratic-screened") return PotentialKind::InverseQuadraticScreened;
  if (name == "constant") return PotentialKind::Constant;
  throw Error(ErrorCode::InvalidArgument, "unknown potential kind '" + name + "'");
}

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::GaussianCore: return "gaussian-core";
    case PotentialKind::SoftCore: return "soft-core";
    case PotentialKind::InverseQuadraticScreened: return "inverse-quadratic-screened";
    case PotentialKind::Constant: return "constant";
  }
  return "unknown";
}

PotentialSpec::PotentialSpec(PotentialKind kind, double amplitude, double range, double audit_range)
    : kind_(kind), amplitude_(amplitude), range_(range) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw Error(ErrorCode::InvalidArgument, "potential amplitude must be finite and nonnegative");
  if (!(range > 0.0) || !std::isfinite(range))
    throw Error(ErrorCode::InvalidArgument, "potential range must be positive");
  const double top = audit_range > 0.0 ? audit_range : 10.0 * range;
  constexpr int kAuditPoints = 1000;
  double vmin = 0.0;
  for (int i = 0; i < kAuditPoints; ++i) {
    const double s = top * i / (kAuditPoints - 1);
    const double v = V(s), dv = dV(s);
    if (!std::isfinite(v) || !std::isfinite(dv))
      throw Error(ErrorCode::InvalidArgument, "potential is not finite at s = " + std::to_string(s));
    if (s > 0.0 && dv > 0.0)
      throw Error(ErrorCode::InvalidArgument, "potential is not repulsive: V'(" + std::to_string(s) + ") > 0");
    vmin = std::min(vmin, v);
  }
  lower_bound_ = -vmin;
}

double PotentialSpec::V(double s) const {
  const double x = s / range_;
  switch (kind_) {
    case PotentialKind::GaussianCore: return amplitude_ * std::exp(-x * x);
    case PotentialKind::SoftCore: return amplitude_ / (1.0 + x * x);
    case PotentialKind::InverseQuadraticScreened: return amplitude_ * std::exp(-x * x / 16.0) / (1.0 + x * x);
    case PotentialKind::Constant: return amplitude_;
  }
  return 0.0;
}

double PotentialSpec::dV(double s) const {
  const double x = s / range_;
  const double q = 1.0 + x * x;
  switch (kind_) {
    case PotentialKind::GaussianCore: return -2.0 * amplitude_ * x * std::exp(-x * x) / range_;
    case PotentialKind::SoftCore: return -2.0 * amplitude_ * x / (q * q * range_);
    case PotentialKind::InverseQuadraticScreened:
      return amplitude_ * std::exp(-x * x / 16.0) * (-2.0 * x / (q * q) - x / (8.0 * q)) / range_;
    case PotentialKind::Constant: return 0.0;
  }
  return 0.0;
}

PotentialSpec free_potential() { return PotentialSpec(PotentialKind::GaussianCore, 0.0, 1.0); }

PotentialSpec ScaledFamily::member() const {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "scaling parameter N must be positive");
  return PotentialSpec(base.kind(), base.amplitude() * std::pow(N, d - 1), base.range() / N);
}

double continuum_integral(const PotentialSpec& spec, int d) {
  if (d < 1 || d > 3) throw Error(ErrorCode::DimensionOutOfRange, "d must be 1, 2 or 3");
  if (spec.is_zero()) return 0.0;
  if (spec.kind() == PotentialKind::Constant || (spec.kind() == PotentialKind::SoftCore && d >= 2))
    return std::numeric_limits<double>::infinity();
  const double sphere[] = {2.0, 2.0 * kPi, 4.0 * kPi};
  // s = l t/(1-t) maps [0,1) onto [0,inf); composite Simpson in t.
  const double l = spec.range();
  auto integrand = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double s = l * t / (1.0 - t);
    const double jac = l / ((1.0 - t) * (1.0 - t));
    return spec.V(s) * std::pow(s, d - 1) * jac;
  };
  constexpr int n = 20000;
  double acc = integrand(0.0) + integrand(1.0);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(static_cast<double>(i) / n);
  return sphere[d - 1] * acc / (3.0 * n);
}

RelativeLattice make_relative_lattice(const Grid& grid) {
  RelativeLattice rl;
  rl.d = grid.d;
  rl.M = grid.M;
  rl.h = grid.h;
  rl.size = static_cast<std::size_t>(std::pow(grid.M, grid.d));
  rl.offset.resize(rl.size * rl.d);
  rl.dist.resize(rl.size);
  rl.unit.assign(rl.size * rl.d, 0.0);
  for (std::size_t r = 0; r < rl.size; ++r) {
    std::size_t rest = r;
    double r2 = 0.0;
    for (int j = rl.d - 1; j >= 0; --j) {
      const int o = min_image(static_cast<int>(rest % rl.M), rl.M);
      rest /= rl.M;
      rl.offset[r * rl.d + j] = o;
      r2 += static_cast<double>(o) * o;
    }
    rl.dist[r] = std::sqrt(r2) * rl.h;
    if (r2 == 0.0) continue;
    for (int j = 0; j < rl.d; ++j) {
      const int o = rl.offset[r * rl.d + j];
      if (2 * o != -rl.M) rl.unit[r * rl.d + j] = o / std::sqrt(r2);
    }
  }
  return rl;
}

std::size_t RelativeLattice::negate(std::size_t r) const {
  std::size_t out = 0;
  for (int j = 0; j < d; ++j) out = out * M + static_cast<std::size_t>((M - offset[r * d + j] % M) % M);
  return out;
}

std::size_t relative_index(const Grid& grid, std::size_t site, int a, int b) {
  std::size_t r = 0;
  for (int j = 0; j < grid.d; ++j) {
    const int diff = grid.index(site, a * grid.d + j) - grid.index(site, b * grid.d + j);
    r = r * grid.M + static_cast<std::size_t>((diff + grid.M) % grid.M);
  }
  return r;
}

double lattice_integral(const PotentialSpec& spec, const Grid& grid) {
  const RelativeLattice rl = make_relative_lattice(grid);
  double s = 0.0;
  for (std::size_t r = 0; r < rl.size; ++r) s += spec.V(rl.dist[r]);
  return s * grid.slot_volume();
}

RealField pair_potential_field(const Grid& grid, const PotentialSpec& spec) {
  RealField field(grid.sites, 0.0);
  if (grid.N < 2) return field;
  const RelativeLattice rl = make_relative_lattice(grid);
  RealField table(rl.size);
  for (std::size_t r = 0; r < rl.size; ++r) table[r] = spec.V(rl.dist[r]);
  for (std::size_t s = 0; s < grid.sites; ++s) {
    double v = 0.0;
    for (int a = 0; a < grid.N; ++a)
      for (int b = a + 1; b < grid.N; ++b) v += table[relative_index(grid, s, a, b)];
    // Radial V is even in r, so each unordered pair counts twice.
    field[s] = 2.0 * v;
  }
  return field;
}

}  // namespace bosedyn
