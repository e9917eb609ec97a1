// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "bosedyn/commutator.hpp"
#include "bosedyn/oracles.hpp"

using namespace bosedyn;

namespace {

WaveFunction random_bose_state(const Grid& g, unsigned seed, double spread = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Orbital> orbs;
  for (int a = 0; a < g.N; ++a) {
    std::vector<double> c(g.d), k(g.d);
    for (int j = 0; j < g.d; ++j) {
      c[j] = spread * u(rng);
      k[j] = u(rng);
    }
    orbs.push_back(gaussian_orbital(c, 0.9 + 0.2 * u(rng), k));
  }
  return symmetrize(product_state(g, orbs));
}

std::vector<ActionTerms> sampled_terms(const WaveFunction& psi, const PotentialSpec& spec, double T, double dt,
                                       int stride) {
  std::vector<ActionTerms> out;
  evolve(psi, spec, T, dt,
         {.stride = stride, .keep_snapshots = false, .on_sample = [&](const WaveFunction& p, const Sample&) {
            out.push_back(action_terms(p, spec));
          }});
  return out;
}

}  // namespace

TEST_CASE("reduced density of a uniform state") {
  Grid g = make_grid(1, 2, 16, 8.0);
  WaveFunction uni = product_state(g, plane_wave_orbital({0.0}, 8.0));
  ReducedDensity rd = reduced_density(uni, 0, 1);
  CHECK(rd.h_rel == doctest::Approx(g.h / std::sqrt(2.0)));
  CHECK(rd.integral() == doctest::Approx(0.5));
  for (double v : rd.values) CHECK(v == doctest::Approx(std::sqrt(2.0) * 0.5 / 8.0));
  // C = (1/2)^2 L^{-2} sum over r, r' of |r - r'| h^2 / sqrt(2).
  double mean_dist = 0.0;
  for (int m = 0; m < 16; ++m) mean_dist += std::abs(min_image(m, 16)) * g.h / 16.0;
  CHECK(correlation_C(uni) == doctest::Approx(0.25 * mean_dist / std::sqrt(2.0)));
  CHECK(action_L(uni) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(pair_marginal(uni, 0, 0), Error);
}

TEST_CASE("correlation functional against the double-sum oracle") {
  for (const Grid& g : {make_grid(1, 2, 8, 6.0), make_grid(1, 3, 8, 6.0), make_grid(2, 2, 8, 8.0)}) {
    WaveFunction psi = random_bose_state(g, 5, 1.5);
    CHECK(correlation_C(psi) == doctest::Approx(oracle::correlation_C(psi)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(oracle::correlation_C(random_bose_state(make_grid(1, 2, 32, 8.0), 1)), Error);
}

TEST_CASE("action is odd under conjugation and zero for real states") {
  Grid g = make_grid(2, 2, 16, 10.0);
  WaveFunction psi = random_bose_state(g, 9);
  WaveFunction conj = psi;
  for (cplx& z : conj.values) z = std::conj(z);
  CHECK(action_L(conj) == doctest::Approx(-action_L(psi)).epsilon(1e-12));
  CHECK(action_L_analytic(conj) == doctest::Approx(-action_L_analytic(psi)).epsilon(1e-12));
  WaveFunction real = psi;
  for (cplx& z : real.values) z = std::abs(z);
  CHECK(std::abs(action_L(real)) < 1e-14);
  CHECK(std::abs(action_L_analytic(real)) < 1e-14);
}

TEST_CASE("diagonal square two ways") {
  for (const Grid& g : {make_grid(1, 3, 16, 10.0), make_grid(2, 2, 16, 8.0), make_grid(3, 2, 8, 8.0)}) {
    WaveFunction psi = random_bose_state(g, 2);
    const double direct = s_ds_direct(psi);
    CHECK(direct > 0.0);
    CHECK(s_ds_fourier(psi) == doctest::Approx(direct).epsilon(1e-6));
    CHECK(action_terms(psi, free_potential()).S_ds_square == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("route B terms are nonnegative on Bose states") {
  PotentialSpec spec(PotentialKind::GaussianCore, 4.0, 1.0);
  for (const Grid& g : {make_grid(1, 3, 16, 10.0), make_grid(3, 2, 8, 8.0)}) {
    for (unsigned seed : {1u, 2u, 3u}) {
      WaveFunction psi = random_bose_state(g, seed);
      const ActionTerms t = action_terms(psi, spec);
      const double scale = t.h1 * t.h1 * t.l2 * t.l2;
      CHECK(t.S_cm_B >= -1e-10 * scale);
      CHECK(t.S_cv_B >= -1e-10 * scale);
      CHECK(t.S_ds_B >= 0.0);
      CHECK(t.S_pr_B >= -1e-10 * scale);
      CHECK(std::abs(t.L_analytic) <= t.h1 * std::pow(t.l2, 3));
    }
  }
  CHECK(std::isnan(action_terms(random_bose_state(make_grid(2, 2, 8, 8.0), 1), spec).S_ds_B));
}

TEST_CASE("time-derivative identities converge at second order in d = 1") {
  Grid g = make_grid(1, 2, 64, 20.0);
  WaveFunction psi = random_bose_state(g, 3);
  PotentialSpec spec(PotentialKind::GaussianCore, 4.0, 1.0);
  double prev_cl = 0.0, prev_dec = 0.0;
  for (int level = 0; level < 3; ++level) {
    const double dt = 2e-3 / (1 << level);
    ActionReport rep = action_series(sampled_terms(psi, spec, 0.2, dt, 5), 5 * dt, g.N);
    CHECK(rep.positivity_min_B >= -1e-10);
    CHECK(rep.L_min_increment >= 0.0);
    CHECK(rep.C_convexity_min >= 0.0);
    CHECK(rep.L_bound_ratio_max <= 1.0);
    CHECK(rep.square_margin > 0.0);
    CHECK(rep.decomposition_residual < 1e-8);
    if (level > 0) {
      CHECK(prev_cl / rep.CL_residual > 3.5);
      CHECK(prev_cl / rep.CL_residual < 4.5);
      CHECK(prev_dec / rep.decomposition_residual_fd > 3.3);
    }
    prev_cl = rep.CL_residual;
    prev_dec = rep.decomposition_residual_fd;
  }
}

TEST_CASE("time-derivative identities in d = 3") {
  const double L = 8.0, q = 2.0 * kPi / L;
  Grid g = make_grid(3, 2, 8, L);
  WaveFunction psi = symmetrize(product_state(
      g, std::vector<Orbital>{periodic_gaussian_orbital({-0.8, 0.3, 0.0}, 2.0, L, {q, 0.0, 0.0}),
                              periodic_gaussian_orbital({0.8, 0.0, -0.2}, 2.0, L, {-q, q, 0.0})}));
  PotentialSpec spec(PotentialKind::GaussianCore, 4.0, 1.0);
  ActionReport rep = action_series(sampled_terms(psi, spec, 0.04, 2e-3, 2), 4e-3, g.N);
  CHECK(rep.CL_residual < 1e-4);
  // M = 8 leaves products of psi partly aliased; M = 12 is exact to rounding.
  CHECK(rep.decomposition_residual < 1e-3);
  CHECK(rep.decomposition_residual_fd < 1e-3);
  CHECK(rep.positivity_min_B >= 0.0);
}

TEST_CASE("series statistics") {
  std::vector<ActionTerms> s(5);
  for (int i = 0; i < 5; ++i) {
    s[i].t = 0.1 * i;
    s[i].C = 1.0 + 2.0 * s[i].t;
    s[i].L = 2.0;
    s[i].l2 = 1.0;
    s[i].h1 = 4.0;
    s[i].S_ds_square = 1.0;
  }
  ActionReport rep = action_series(s, 0.1, 2);
  CHECK(rep.late_slope == doctest::Approx(2.0));
  CHECK(rep.late_fit_residual < 1e-12);
  CHECK(rep.CL_residual < 1e-12);
  CHECK(rep.square_lhs == doctest::Approx(0.4));
  CHECK(rep.square_rhs == doctest::Approx(16.0));
  CHECK(rep.L_bound_ratio_max == doctest::Approx(0.5));
  CHECK_THROWS_AS(action_series(Trajectory{}, free_potential()), Error);
}

TEST_CASE("kernel audit") {
  for (int d : {2, 3, 5}) {
    KernelAudit audit = kernel_psd_audit(d, 200, 42);
    CHECK(audit.samples == 200);
    CHECK(audit.min_quadratic_form >= -1e-12);
    CHECK(audit.max_eigenvalue_error < 1e-10);
  }
  CHECK_THROWS_AS(r_kernel({0.0, 0.0}), Error);
  const Eigen::MatrixXd r = r_kernel({3.0, 4.0});
  CHECK((r * Eigen::Vector2d(3.0, 4.0)).norm() < 1e-14);
}

TEST_CASE("vanishing S-terms") {
  Grid g = make_grid(1, 2, 32, 10.0);
  WaveFunction real = random_bose_state(g, 4);
  for (cplx& z : real.values) z = std::abs(z);
  const ActionTerms tr = action_terms(real, PotentialSpec(PotentialKind::GaussianCore, 2.0, 1.0));
  CHECK(std::abs(tr.S_cv) < 1e-8);
  CHECK(std::abs(tr.S_cv_B) < 1e-12);

  WaveFunction uni = product_state(g, plane_wave_orbital({0.0}, 10.0));
  const ActionTerms tu = action_terms(uni, free_potential());
  CHECK(std::abs(tu.S_cm) < 1e-14);
  CHECK(std::abs(tu.S_cm_B) < 1e-14);
  // rho~ = 2^{1/2} / (2 L) on a relative cell of length L / sqrt(2), ordered pairs counted twice.
  CHECK(tu.S_ds_square == doctest::Approx(2.0 * 0.5 / (std::sqrt(2.0) * 10.0)));

  const ActionTerms tc = action_terms(random_bose_state(g, 6), PotentialSpec(PotentialKind::Constant, 3.0, 1.0));
  CHECK(std::abs(tc.S_pr) < 1e-14);
  CHECK(tc.S_pr_B == 0.0);
}

TEST_CASE("correlation functional of point masses") {
  Grid g = make_grid(1, 2, 16, 8.0);
  WaveFunction psi{g, ComplexField(g.sites), 0.0, true};
  // Both particles on one site: rho~ is a single point mass.
  psi.values[g.axis_stride(0) * 3 + 3] = 1.0;
  normalize(psi);
  CHECK(correlation_C(psi) == 0.0);
  // Equal masses at relative offsets 0 and 3 cells.
  WaveFunction two{g, ComplexField(g.sites), 0.0, false};
  two.values[g.axis_stride(0) * 3 + 3] = 1.0;
  two.values[g.axis_stride(0) * 6 + 3] = 1.0;
  normalize(two);
  // R = 1/4 at each offset (total 1/2), |u - u'| = 3 h / sqrt(2), two ordered (r, r') terms.
  CHECK(correlation_C(two) == doctest::Approx(2.0 * 0.25 * 0.25 * 3.0 * g.h / std::sqrt(2.0)));
}
