// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "bosedyn/hydrodynamics.hpp"

using namespace bosedyn;

namespace {

WaveFunction smooth_random_state(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Orbital> orbs;
  for (int a = 0; a < g.N; ++a) {
    std::vector<double> c(g.d), k(g.d);
    for (int j = 0; j < g.d; ++j) {
      c[j] = 1.5 * u(rng);
      k[j] = u(rng);
    }
    orbs.push_back(gaussian_orbital(c, 1.0 + 0.2 * u(rng), k));
  }
  return symmetrize(product_state(g, orbs));
}

Trajectory repulsive_run(double dt, int stride) {
  Grid g = make_grid(1, 2, 32, 12.0);
  WaveFunction psi = smooth_random_state(g, 3);
  return evolve(psi, PotentialSpec(PotentialKind::GaussianCore, 4.0, 1.0), 0.1, dt, {.stride = stride});
}

}  // namespace

TEST_CASE("density conventions") {
  Grid g = make_grid(1, 2, 8, 8.0);
  WaveFunction psi = product_state(g, plane_wave_orbital({0.0}, 8.0));
  for (double r : density(psi)) CHECK(r == doctest::Approx(1.0 / 128.0));
  WaveFunction s = smooth_random_state(make_grid(1, 3, 8, 6.0), 1);
  RealField rho = density(s);
  double mass = 0.0;
  for (double r : rho) mass += r;
  CHECK(mass * s.grid.cell_volume() == doctest::Approx(0.5).epsilon(1e-12));
  RealField rho_t = density(transpose(s, 0, 2));
  for (std::size_t i = 0; i < rho.size(); ++i) CHECK(std::abs(rho[i] - rho_t[i]) < 1e-12);
}

TEST_CASE("momentum of real and plane-wave states") {
  Grid g = make_grid(1, 2, 16, 8.0);
  WaveFunction real_state = product_state(g, gaussian_orbital({0.0}, 1.0));
  for (const auto& pa : momentum(real_state))
    for (double v : pa) CHECK(std::abs(v) < 1e-14);

  const double k = 2.0 * kPi * 2.0 / 8.0;
  WaveFunction pw = product_state(g, plane_wave_orbital({k}, 8.0));
  const auto p = momentum(pw);
  const auto sigma = stress(pw, 0, 1);
  for (std::size_t i = 0; i < g.sites; ++i) {
    const double m = std::norm(pw.values[i]);
    CHECK(p[0][i] == doctest::Approx(k * m).epsilon(1e-12));
    CHECK(p[1][i] == doctest::Approx(k * m).epsilon(1e-12));
    CHECK(sigma[0][i] == doctest::Approx(2.0 * k * k * m).epsilon(1e-12));
  }
}

TEST_CASE("stress identities on random smooth states") {
  Grid g = make_grid(2, 2, 16, 8.0);
  WaveFunction psi = smooth_random_state(g, 5);
  const Spectral& sp = Spectral::get(g);
  const auto grad = sp.gradient(psi.values);
  const RealField rho = density(psi);
  double rho_max = 0.0;
  for (double r : rho) rho_max = std::max(rho_max, r);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const auto sab = stress(psi, a, b);
      const auto sba = stress(psi, b, a);
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          const int al = a * 2 + j, be = b * 2 + k;
          for (std::size_t i = 0; i < g.sites; ++i) {
            CHECK(sab[j * 2 + k][i] == doctest::Approx(sba[k * 2 + j][i]).epsilon(1e-13));
            if (a == b && j == k) CHECK(sab[j * 2 + k][i] >= 0.0);
            if (rho[i] < 1e-6 * rho_max) continue;
            // rho^{-1} (p p + grad rho grad rho) with grad rho = Re(conj(psi) grad psi).
            const cplx za = std::conj(psi.values[i]) * grad[al][i];
            const cplx zb = std::conj(psi.values[i]) * grad[be][i];
            const double alt = (za.imag() * zb.imag() + za.real() * zb.real()) / rho[i];
            CHECK(sab[j * 2 + k][i] == doctest::Approx(alt).epsilon(1e-8));
          }
        }
    }
}

TEST_CASE("force data") {
  Grid g = make_grid(1, 3, 16, 10.0);
  ForceData none = force_data(g, PotentialSpec(PotentialKind::Constant, 2.0, 1.0));
  for (const auto& w : none.w)
    for (double v : w) CHECK(v == 0.0);
  for (const auto& m : none.Mvec)
    for (double v : m) CHECK(v == 0.0);

  PotentialSpec spec(PotentialKind::GaussianCore, 1.0, 1.0);
  ForceData fd = force_data(g, spec);
  CHECK(&fd.weight(0, 2) == &fd.weight(2, 0));
  WaveFunction psi = smooth_random_state(g, 9);
  const auto term = force_term(psi, fd);
  // Direct loop: M_a rho = -sum_b 2 V'(|x_a - x_b|) sign(x_a - x_b) rho.
  for (std::size_t s = 0; s < g.sites; ++s) {
    const double rho = 0.5 * std::norm(psi.values[s]);
    for (int a = 0; a < 3; ++a) {
      double direct = 0.0;
      for (int b = 0; b < 3; ++b) {
        if (b == a) continue;
        const int o = min_image(g.index(s, a) - g.index(s, b), g.M);
        const double w = fd.weight(a, b)[s];
        CHECK(w == doctest::Approx(4.0 * std::abs(o * g.h) * std::exp(-std::pow(o * g.h, 2))));
        direct += -2.0 * spec.dV(std::abs(o * g.h)) * min_image_sign(o, g.M) * rho;
      }
      CHECK(term[a][s] == doctest::Approx(kOrderedPairForceFactor * direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("conservation-law residuals vanish on exact states") {
  Grid g = make_grid(1, 2, 16, 8.0);
  const double k = 2.0 * kPi / 8.0;
  Trajectory pw = evolve(product_state(g, plane_wave_orbital({k}, 8.0)), free_potential(), 0.03, 1e-2);
  CHECK(mass_residual(pw, 1).sup <= 1e-10);
  CHECK(momentum_residual(pw, 1, free_potential()).sup <= 1e-9);
  Trajectory uni = evolve(product_state(g, plane_wave_orbital({0.0}, 8.0)), free_potential(), 0.03, 1e-2);
  CHECK(mass_residual(uni, 1).sup <= 1e-10);
  CHECK_THROWS_AS(mass_residual(uni, 0), Error);
  CHECK_THROWS_AS(mass_residual(uni, 3), Error);
}

TEST_CASE("conservation-law residuals converge at second order") {
  Trajectory coarse = repulsive_run(4e-3, 5);
  Trajectory fine = repulsive_run(2e-3, 5);
  PotentialSpec spec(PotentialKind::GaussianCore, 4.0, 1.0);
  for (std::size_t i : {1, 2, 3}) {
    const double mr = mass_residual(coarse, i).sup / mass_residual(fine, 2 * i).sup;
    const double pr = momentum_residual(coarse, i, spec).sup / momentum_residual(fine, 2 * i, spec).sup;
    CHECK(mr > 3.5);
    CHECK(mr < 4.5);
    CHECK(pr > 3.5);
    CHECK(pr < 4.5);
  }
}
