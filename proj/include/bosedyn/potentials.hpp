// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file potentials.hpp
 * @brief Radial repulsive pair potentials, their N-scaled family, and the
 *        relative-offset tables used to evaluate pair quantities on the lattice.
 */

#pragma once

#include <string>
#include <vector>

#include "bosedyn/lattice.hpp"

namespace bosedyn {

enum class PotentialKind {
  GaussianCore,             ///< A exp(-s^2/l^2)
  SoftCore,                 ///< A / (1 + s^2/l^2)
  InverseQuadraticScreened, ///< A l^2/(l^2 + s^2) exp(-s^2/(16 l^2))
  Constant,                 ///< A everywhere; a test stub with V' = 0
};

PotentialKind parse_potential_kind(const std::string& name);
std::string to_string(PotentialKind kind);

class PotentialSpec {
 public:
  /// Audits V' <= 0 on 1000 points of [0, audit_range]; a nonpositive range
  /// selects 10 l.
  PotentialSpec(PotentialKind kind, double amplitude, double range, double audit_range = 0.0);

  PotentialKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double range() const { return range_; }
  /// c >= 0 with V >= -c on the audit grid.
  double lower_bound() const { return lower_bound_; }

  double V(double s) const;
  double dV(double s) const;
  /// w(s) = -2 V'(s).
  double weight(double s) const { return -2.0 * dV(s); }
  bool is_zero() const { return amplitude_ == 0.0; }

 private:
  PotentialKind kind_;
  double amplitude_;
  double range_;
  double lower_bound_ = 0.0;
};

/// Free dynamics: a Gaussian core of zero amplitude.
PotentialSpec free_potential();

/// V_N(s) = N^{d-1} V_1(N s): the integral over R^d scales as 1/N, so the
/// hierarchy-facing strength (N-1) V_N has an O(1) integral. At d = 3 this is
/// N^2 V_1(N s).
struct ScaledFamily {
  PotentialSpec base;
  int N = 1;
  int d = 1;

  PotentialSpec member() const;
};

/// Integral of V over R^d by radial quadrature.
double continuum_integral(const PotentialSpec& spec, int d);
/// Lattice sum of V(|r|) over the periodic relative lattice, times h^d.
double lattice_integral(const PotentialSpec& spec, const Grid& grid);

/// Relative-offset lattice of one pair: M^d offsets r = x_a - x_b, stored in
/// the single-slot row-major order, with minimal-image geometry.
struct RelativeLattice {
  int d = 1;
  int M = 0;
  double h = 0.0;
  std::size_t size = 0;
  std::vector<int> offset;       ///< minimal-image integer offsets, size*d
  RealField dist;                ///< |r|, minimal image
  std::vector<double> unit;      ///< r/|r| per component, size*d; 0 at r = 0 and on antipodal components

  int offset_of(std::size_t r, int j) const { return offset[r * d + j]; }
  double unit_of(std::size_t r, int j) const { return unit[r * d + j]; }
  /// Index of the offset with components negated.
  std::size_t negate(std::size_t r) const;
};

RelativeLattice make_relative_lattice(const Grid& grid);

/// Index into the relative lattice of x_a - x_b at `site`.
std::size_t relative_index(const Grid& grid, std::size_t site, int a, int b);

/// Sum over ordered pairs a != b of V(|x_a - x_b|).
RealField pair_potential_field(const Grid& grid, const PotentialSpec& spec);

}  // namespace bosedyn
