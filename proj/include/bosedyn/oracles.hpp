// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file oracles.hpp
 * @brief Nested-loop reference implementations of the contracted sums.
 *
 * These avoid the FFT plans, relative-offset tables and pair reductions of
 * the optimized paths: derivatives come from a naive DFT differentiation
 * matrix and geometry from coordinates. Intended for M <= 16, N <= 3.
 */

#pragma once

#include "bosedyn/bbgky.hpp"
#include "bosedyn/lattice.hpp"
#include "bosedyn/potentials.hpp"

namespace bosedyn::oracle {

inline constexpr int kMaxPoints = 16;
inline constexpr int kMaxParticles = 3;

/// Throws BudgetExceeded outside M <= 16, N <= 3.
void check_budget(const Grid& grid);

/// Spectral first derivative along `axis` by an explicit differentiation matrix.
ComplexField derivative(const Grid& grid, const ComplexField& f, int axis);

/// Minimal-image displacement x_a - x_b (component j) at a site, from coordinates.
double displacement(const Grid& grid, std::size_t site, int a, int b, int j);

double interaction_term(const WaveFunction& psi, const PotentialSpec& spec);
double sigma_term(const WaveFunction& psi);

/// C as the raw double sum over (X, X') of rho rho' |r - r'| / sqrt(2), unordered pairs.
double correlation_C(const WaveFunction& psi);

/// gamma_k by explicit loops over (X, X', Y).
Marginal marginal(const WaveFunction& psi, int k);
/// (N - 1) sum_y [V(x - y) - V(x' - y)] gamma_2(x, y | x', y) h^d straight from psi,
/// with distances from coordinates.
Marginal collision_apply(const WaveFunction& psi, const PotentialSpec& spec);

}  // namespace bosedyn::oracle
