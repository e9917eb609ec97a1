// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "bosedyn/potentials.hpp"
#include "bosedyn/propagator.hpp"

using namespace bosedyn;

TEST_CASE("pair potential field") {
  Grid g2 = make_grid(1, 2, 8, 8.0);
  for (double v : pair_potential_field(g2, free_potential())) CHECK(v == 0.0);

  PotentialSpec gauss(PotentialKind::GaussianCore, 4.0, 1.0);
  RealField f = pair_potential_field(g2, gauss);
  for (std::size_t s = 0; s < g2.sites; ++s) {
    const int m1 = g2.index(s, 0), m2 = g2.index(s, 1);
    const int o = min_image(m1 - m2, g2.M);
    CHECK(f[s] == doctest::Approx(2.0 * 4.0 * std::exp(-std::pow(o * g2.h, 2))));
    if (m1 == m2) CHECK(f[s] == doctest::Approx(8.0));
  }

  Grid g3 = make_grid(1, 3, 4, 4.0);
  for (double v : pair_potential_field(g3, PotentialSpec(PotentialKind::Constant, 1.0, 1.0))) CHECK(v == 6.0);
}

TEST_CASE("periodic distance in three dimensions") {
  Grid g = make_grid(3, 2, 4, 4.0);
  RelativeLattice rl = make_relative_lattice(g);
  // Offset (3,1,0) is (-1,1,0) under the minimal image.
  const std::size_t r = 3 * 16 + 1 * 4 + 0;
  CHECK(rl.dist[r] == doctest::Approx(std::sqrt(2.0)));
  CHECK(rl.unit_of(r, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(rl.negate(rl.negate(r)) == r);
  CHECK(rl.unit_of(rl.negate(r), 1) == doctest::Approx(-rl.unit_of(r, 1)));
}

TEST_CASE("potential derivatives match finite differences") {
  for (auto kind : {PotentialKind::GaussianCore, PotentialKind::SoftCore, PotentialKind::InverseQuadraticScreened}) {
    PotentialSpec spec(kind, 2.5, 0.8);
    for (double s : {0.1, 0.5, 1.3, 3.0}) {
      const double eps = 1e-5;
      const double fd = (spec.V(s + eps) - spec.V(s - eps)) / (2 * eps);
      CHECK(spec.dV(s) == doctest::Approx(fd).epsilon(1e-7));
      CHECK(spec.weight(s) >= 0.0);
    }
    CHECK(spec.lower_bound() == 0.0);
  }
  PotentialSpec g(PotentialKind::GaussianCore, 1.0, 1.0);
  CHECK(g.weight(0.7) == doctest::Approx(4.0 * 0.7 * std::exp(-0.49)));
}

TEST_CASE("potential validation") {
  CHECK_THROWS_AS(PotentialSpec(PotentialKind::GaussianCore, -1.0, 1.0), Error);
  CHECK_THROWS_AS(PotentialSpec(PotentialKind::GaussianCore, 1.0, 0.0), Error);
  CHECK_THROWS_AS(parse_potential_kind("hard-sphere"), Error);
  CHECK(parse_potential_kind("soft-core") == PotentialKind::SoftCore);
}

TEST_CASE("scaled family integrals") {
  PotentialSpec base(PotentialKind::GaussianCore, 1.5, 0.7);
  const double l = 0.7;
  CHECK(continuum_integral(base, 3) == doctest::Approx(1.5 * std::pow(kPi, 1.5) * l * l * l).epsilon(1e-8));
  CHECK(continuum_integral(base, 1) == doctest::Approx(1.5 * std::sqrt(kPi) * l).epsilon(1e-8));
  for (int d : {1, 3})
    for (int N : {2, 3, 4}) {
      const double ratio = continuum_integral(ScaledFamily{base, N, d}.member(), d) / continuum_integral(base, d);
      CHECK(ratio == doctest::Approx(1.0 / N).epsilon(1e-2));
    }
  PotentialSpec screened(PotentialKind::InverseQuadraticScreened, 1.0, 1.0);
  const double r = continuum_integral(ScaledFamily{screened, 3, 3}.member(), 3) / continuum_integral(screened, 3);
  CHECK(r == doctest::Approx(1.0 / 3.0).epsilon(1e-2));
}

TEST_CASE("plane wave under free flow") {
  const double L = 8.0;
  const double k = 2.0 * kPi / L;
  Grid g = make_grid(1, 2, 16, L);
  WaveFunction psi = product_state(g, plane_wave_orbital({k}, L));
  CHECK(energy(psi, free_potential()).total() == doctest::Approx(2.0 * k * k).epsilon(1e-12));
  WaveFunction out = step(psi, 0.05, free_potential());
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    CHECK(std::abs(std::abs(out.values[i]) - std::abs(psi.values[i])) < 1e-12);
    // Kinetic eigenstate: phase e^{+i 2k^2 dt}.
    CHECK(std::abs(out.values[i] - psi.values[i] * std::polar(1.0, 2.0 * k * k * 0.05)) < 1e-12);
  }
}

TEST_CASE("uniform state has zero energy") {
  Grid g = make_grid(1, 2, 8, 8.0);
  CHECK(std::abs(energy(product_state(g, plane_wave_orbital({0.0}, 8.0)), free_potential()).total()) < 1e-14);
}

TEST_CASE("step is unitary") {
  Grid g = make_grid(1, 3, 16, 10.0);
  WaveFunction psi = product_state(g, gaussian_orbital({0.5}, 1.0, {0.8}));
  PotentialSpec spec(PotentialKind::GaussianCore, 4.0, 1.0);
  Propagator prop(g, spec);
  for (int n = 0; n < 20; ++n) {
    prop.step(psi, 1e-2);
    CHECK(std::abs(l2_norm(psi) - 1.0) < 1e-12);
  }
}

TEST_CASE("free Gaussian dispersion law") {
  const double s = 1.0, t = 1.0;
  Grid g = make_grid(1, 1, 256, 40.0);
  WaveFunction psi = product_state(g, gaussian_orbital({0.0}, s));
  Trajectory traj = evolve(psi, free_potential(), t, 0.05, {.stride = 20});
  const WaveFunction& end = traj.snapshots.back();
  double x2 = 0.0;
  for (std::size_t i = 0; i < g.sites; ++i) x2 += g.coords[i] * g.coords[i] * std::norm(end.values[i]) * g.h;
  // |psi(t)|^2 ~ exp(-x^2/w^2) with w^2 = s^2 (1 + 4 t^2 / s^4).
  const double w2 = s * s * (1.0 + 4.0 * t * t / std::pow(s, 4));
  CHECK(x2 == doctest::Approx(0.5 * w2).epsilon(1e-8));
}

TEST_CASE("evolve bookkeeping") {
  Grid g = make_grid(1, 2, 16, 10.0);
  WaveFunction psi = product_state(g, gaussian_orbital({0.0}, 1.0));
  Trajectory zero = evolve(psi, free_potential(), 0.0, 1e-2);
  CHECK(zero.snapshots.size() == 1);
  Trajectory traj = evolve(psi, free_potential(), 0.2, 1e-2, {.stride = 5});
  CHECK(traj.samples.size() == 5);
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    CHECK(traj.samples[i].t > traj.samples[i - 1].t);
    CHECK(std::abs(traj.samples[i].l2 - 1.0) < 1e-10);
  }
  CHECK_THROWS_AS(evolve(psi, free_potential(), 0.2, 1e-2, {.stride = 3}), Error);
  CHECK_THROWS_AS(evolve(psi, free_potential(), 0.2, 0.03), Error);
}

TEST_CASE("boundary warning fires for wide states") {
  Grid g = make_grid(1, 2, 16, 6.0);
  WaveFunction psi = product_state(g, gaussian_orbital({0.0}, 2.0));
  Trajectory traj = evolve(psi, free_potential(), 0.01, 1e-2);
  CHECK(!traj.warnings.empty());
}

TEST_CASE("permutation equivariance") {
  Grid g = make_grid(1, 3, 16, 12.0);
  std::vector<Orbital> orbs = {gaussian_orbital({-2.0}, 1.0), gaussian_orbital({0.5}, 0.9, {1.0}),
                               gaussian_orbital({2.0}, 1.1)};
  WaveFunction psi = product_state(g, orbs);
  PotentialSpec spec(PotentialKind::SoftCore, 3.0, 1.0);
  Trajectory a = evolve(psi, spec, 0.1, 1e-2, {.stride = 10});
  Trajectory b = evolve(transpose(psi, 0, 2), spec, 0.1, 1e-2, {.stride = 10});
  WaveFunction ta = transpose(a.snapshots.back(), 0, 2);
  double dev = 0.0;
  for (std::size_t i = 0; i < ta.values.size(); ++i) dev = std::max(dev, std::abs(ta.values[i] - b.snapshots.back().values[i]));
  CHECK(dev < 1e-10);
}

TEST_CASE("energy drift is second order") {
  Grid g = make_grid(1, 2, 32, 12.0);
  WaveFunction psi = product_state(g, gaussian_orbital({0.0}, 1.0, {0.5}));
  psi = symmetrize(product_state(g, std::vector<Orbital>{gaussian_orbital({-1.0}, 1.0, {0.5}),
                                                          gaussian_orbital({1.0}, 1.0, {-0.5})}));
  PotentialSpec spec(PotentialKind::GaussianCore, 4.0, 1.0);
  auto drift = [&](double dt) {
    Trajectory t = evolve(psi, spec, 0.5, dt, {.stride = static_cast<int>(std::lround(0.5 / dt)), .keep_snapshots = false});
    return std::abs(t.samples.back().e_kin + t.samples.back().e_pot - t.samples.front().e_kin - t.samples.front().e_pot);
  };
  const double ratio = drift(2e-3) / drift(1e-3);
  CHECK(ratio > 3.4);
  CHECK(ratio < 4.6);
}
