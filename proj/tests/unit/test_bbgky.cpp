// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "bosedyn/bbgky.hpp"
#include "bosedyn/oracles.hpp"

using namespace bosedyn;

namespace {

WaveFunction random_bose_state(const Grid& g, unsigned seed, double spread = 1.5) {
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

double max_dev(const KernelMatrix& a, const KernelMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("marginals of product and symmetric states") {
  const Orbital orb = gaussian_orbital({0.3}, 1.0, {0.7});
  Grid g = make_grid(1, 3, 16, 8.0);
  WaveFunction psi = product_state(g, orb);
  WaveFunction phi = product_state(make_grid(1, 1, 16, 8.0), orb);
  const Marginal g1 = marginal(psi, 1);
  const Eigen::Map<const Eigen::VectorXcd> v(phi.values.data(), 16);
  CHECK(max_dev(g1.values, KernelMatrix(v * v.adjoint())) < 1e-14);
  CHECK(std::abs(g1.trace() - 1.0) < 1e-12);

  WaveFunction sym = random_bose_state(make_grid(1, 3, 8, 6.0), 3);
  const Marginal s1 = marginal(sym, 1), s2 = marginal(sym, 2);
  const MarginalReport r1 = check_marginal(s1), r2 = check_marginal(s2, 1.0, &s1);
  CHECK(r1.hermiticity < 1e-12);
  CHECK(r1.trace_error < 1e-12);
  CHECK(r1.psd_min_eig >= -1e-10);
  CHECK(r2.hermiticity < 1e-12);
  CHECK(r2.trace_error < 1e-12);
  CHECK(r2.bose_symmetry < 1e-12);
  CHECK(r2.compatibility < 1e-12);
  const Marginal o2 = oracle::marginal(sym, 2);
  CHECK(max_dev(s2.values, o2.values) < 1e-12 * s2.values.cwiseAbs().maxCoeff());

  CHECK_THROWS_AS(marginal(sym, 4), Error);
  CHECK(std::abs(marginal(sym, 3).trace() - 1.0) < 1e-12);
  CHECK_THROWS_AS(marginal(sym, 0), Error);
  CHECK_THROWS_AS(marginal(product_state(make_grid(1, 2, 64, 8.0), orb), 1, 1000), Error);
}

TEST_CASE("collision operator") {
  WaveFunction psi = random_bose_state(make_grid(1, 3, 8, 6.0), 5);
  const Marginal g2 = marginal(psi, 2);
  const Marginal zero = collision_apply(g2, PotentialSpec(PotentialKind::Constant, 2.0, 1.0), 3);
  CHECK(zero.values.cwiseAbs().maxCoeff() < 1e-15);

  PotentialSpec spec(PotentialKind::GaussianCore, 3.0, 1.0);
  const Marginal c = collision_apply(g2, spec, 3);
  for (Eigen::Index x = 0; x < c.values.rows(); ++x) CHECK(std::abs(c.values(x, x)) < 1e-15);
  const Marginal o = oracle::collision_apply(psi, spec);
  CHECK(max_dev(c.values, o.values) < 1e-12 * o.values.cwiseAbs().maxCoeff());
  CHECK_THROWS_AS(collision_apply(marginal(psi, 1), spec, 3), Error);
}

TEST_CASE("first hierarchy equation") {
  SUBCASE("free plane-wave product") {
    Grid g = make_grid(1, 2, 16, 8.0);
    WaveFunction pw = product_state(g, plane_wave_orbital({2.0 * kPi / 8.0}, 8.0));
    Trajectory traj = evolve(pw, free_potential(), 0.02, 1e-2);
    CHECK(hierarchy_residual_k1(traj, 1, free_potential()).sup <= 1e-9);
    CHECK_THROWS_AS(hierarchy_residual_k1(traj, 0, free_potential()), Error);
    CHECK_THROWS_AS(hierarchy_residual_k1(traj, 2, free_potential()), Error);
  }
  SUBCASE("repulsive run converges at second order") {
    Grid g = make_grid(1, 3, 32, 10.0);
    WaveFunction psi = random_bose_state(g, 2, 1.0);
    PotentialSpec spec(PotentialKind::GaussianCore, 4.0, 1.0);
    double prev = 0.0;
    for (int level = 0; level < 3; ++level) {
      const double dt = 4e-3 / (1 << level);
      Trajectory traj = evolve(psi, spec, 20 * dt, dt, {.stride = 10});
      const HierarchyResidual res = hierarchy_residual_k1(traj, 1, spec);
      CHECK(res.antihermitian_defect < 1e-10 * res.scale);
      if (level > 0) {
        CHECK(prev / res.sup > 3.5);
        CHECK(prev / res.sup < 4.5);
      }
      prev = res.sup;
    }
  }
}

TEST_CASE("collapse operator and mixed norm") {
  const Orbital orb = gaussian_orbital({0.2}, 0.8, {1.0});
  WaveFunction psi = product_state(make_grid(1, 3, 16, 8.0), orb);
  WaveFunction phi = product_state(make_grid(1, 1, 16, 8.0), orb);
  const Marginal g2 = marginal(psi, 2);
  const Marginal B = b2_collapse(g2, 1.5);
  double dev = 0.0;
  for (int x = 0; x < 16; ++x) {
    CHECK(std::abs(B.values(x, x)) < 1e-15);
    for (int xp = 0; xp < 16; ++xp) {
      const cplx expected = 1.5 * (std::norm(phi.values[x]) - std::norm(phi.values[xp])) * phi.values[x] *
                            std::conj(phi.values[xp]);
      dev = std::max(dev, std::abs(B.values(x, xp) - expected));
    }
  }
  CHECK(dev < 1e-13);
  CHECK(b2_norm(b2_collapse(g2, 0.0)) == 0.0);
  CHECK(b2_norm(b2_collapse(g2, 3.0)) == doctest::Approx(2.0 * b2_norm(B)).epsilon(1e-12));

  const B2Bound lim = limit_b2(g2, 1.0);
  CHECK(lim.norm > 0.0);
  CHECK(lim.margin >= 0.0);
  for (unsigned seed : {1u, 2u}) {
    WaveFunction s = random_bose_state(make_grid(1, 3, 16, 8.0), seed);
    const Marginal s2 = marginal(s, 2);
    CHECK(limit_b2(s2, 2.0).margin >= 0.0);
    const B2Bound fin = finite_n_b2(s2, PotentialSpec(PotentialKind::GaussianCore, 3.0, 1.0), 3);
    CHECK(fin.norm > 0.0);
    CHECK(fin.margin >= 0.0);
    CHECK(fin.ratio > 0.0);
  }
}

TEST_CASE("transport solve") {
  const int M = 16;
  const double L = 8.0;
  const Grid one = make_grid(1, 1, M, L);
  auto field = [&](double t, auto&& f) {
    TransportField tf{1, M, L, t, ComplexField(M * M)};
    for (int v = 0; v < M; ++v)
      for (int z = 0; z < M; ++z) tf.values[v * M + z] = f(v < M / 2 ? v / L : (v - M) / L, one.coords[z]);
    return tf;
  };
  const double q = 2.0 * 2.0 * kPi / L;

  SUBCASE("zero forcing") {
    std::vector<TransportField> f;
    for (int j = 0; j <= 4; ++j) f.push_back(field(0.1 * j, [](double, double) { return cplx{}; }));
    const TransportResult r = transport_solve(f, 0.4, 0.1);
    for (const auto& tf : r.fields)
      for (cplx c : tf.values) CHECK(c == cplx{});
    CHECK(r.margin == 0.0);
  }
  SUBCASE("static forcing against the characteristic integral") {
    const double T = 0.5, dt = 2.5e-5;
    const int n = static_cast<int>(std::lround(T / dt));
    std::vector<TransportField> f;
    f.reserve(n + 1);
    for (int j = 0; j <= n; ++j) f.push_back(field(j * dt, [q](double, double z) { return std::polar(1.0, q * z); }));
    const TransportResult r = transport_solve(f, T, dt);
    const TransportField& last = r.fields.back();
    double err = 0.0;
    for (int vi = 0; vi < M; ++vi) {
      const double v = vi < M / 2 ? vi / L : (vi - M) / L;
      for (int z = 0; z < M; ++z) {
        const double a = 2.0 * kPi * q * v;
        const cplx expected = v == 0.0 ? cplx(T) * std::polar(1.0, q * one.coords[z])
                                       : std::polar(1.0, q * one.coords[z]) * (1.0 - std::polar(1.0, -a * T)) /
                                             cplx(0.0, a);
        err = std::max(err, std::abs(last.values[vi * M + z] - expected));
      }
    }
    CHECK(err < 1e-8);
    CHECK(r.margin >= 0.0);
    // The v = 0 row saturates the bound; allow rounding.
    CHECK(r.margin_scaled >= -1e-12 * r.forcing_integral);
  }
  SUBCASE("gaps and mismatches") {
    std::vector<TransportField> f;
    for (int j = 0; j <= 3; ++j) f.push_back(field(0.1 * j, [](double, double) { return cplx(1.0); }));
    CHECK_THROWS_AS(transport_solve(f, 0.4, 0.1), Error);
    f.push_back(field(0.5, [](double, double) { return cplx(1.0); }));
    CHECK_THROWS_AS(transport_solve(f, 0.4, 0.1), Error);
  }
  SUBCASE("forcing from a simulated kernel") {
    WaveFunction psi = random_bose_state(make_grid(1, 3, M, L), 4);
    PotentialSpec spec(PotentialKind::GaussianCore, 3.0, 1.0);
    Trajectory traj = evolve(psi, spec, 0.2, 1e-3, {.stride = 20});
    std::vector<TransportField> f;
    for (const auto& s : traj.snapshots) {
      Marginal B = collision_apply(marginal(s, 2), spec, 3);
      B.values *= 2.0;
      f.push_back(transport_transform(B));
    }
    const TransportResult r = transport_solve(f, 0.2, 0.02);
    CHECK(r.sup_norm_sq > 0.0);
    CHECK(r.margin >= 0.0);
    CHECK(r.margin_scaled >= 0.0);

    // Two equal samples: the integral is dt times the sheared-coordinate norm,
    // which is the rotated-coordinate norm over 2^{1/2}.
    Marginal B = collision_apply(marginal(traj.snapshots.back(), 2), spec, 3);
    B.t = 0.0;
    std::vector<TransportField> pair{transport_transform(B), transport_transform(B)};
    pair[1].t = 0.1;
    const double nb = b2_norm(B);
    CHECK(transport_solve(pair, 0.1, 0.1).forcing_integral == doctest::Approx(0.1 * nb * nb / std::sqrt(2.0)));
  }
}

TEST_CASE("Gross-Pitaevskii closure") {
  Grid one = make_grid(1, 1, 32, 8.0);
  WaveFunction phi = product_state(one, gaussian_orbital({0.0}, 1.0, {1.0}));
  GPTrajectory free = gp_solve(phi, 0.0, 0.2, 1e-3, 50);
  Trajectory ref = evolve(phi, free_potential(), 0.2, 1e-3, {.stride = 50});
  for (std::size_t i = 0; i < free.snapshots.size(); ++i) {
    double dev = 0.0;
    for (std::size_t s = 0; s < one.sites; ++s)
      dev = std::max(dev, std::abs(free.snapshots[i].values[s] - ref.snapshots[i].values[s]));
    CHECK(dev < 1e-8);
  }

  WaveFunction uni = product_state(one, plane_wave_orbital({0.0}, 8.0));
  const double g = 3.0, T = 0.4;
  GPTrajectory u = gp_solve(uni, g, T, 1e-2, 40);
  const double amp2 = 1.0 / 8.0;
  CHECK(u.samples.front().mu == doctest::Approx(0.5 * g * amp2));
  const cplx expected = uni.values[0] * std::polar(1.0, 0.5 * g * amp2 * T);
  for (cplx z : u.snapshots.back().values) CHECK(std::abs(z - expected) < 1e-12);

  GPTrajectory nl = gp_solve(phi, 5.0, 0.5, 1e-3, 100);
  for (const auto& s : nl.samples) CHECK(std::abs(s.norm - 1.0) < 1e-10);
  CHECK_THROWS_AS(gp_solve(product_state(make_grid(1, 2, 8, 8.0), plane_wave_orbital({0.0}, 8.0)), 1.0, 0.1, 0.01),
                  Error);
}

TEST_CASE("mean-field distance") {
  Grid one = make_grid(1, 1, 16, 8.0);
  WaveFunction a = product_state(one, plane_wave_orbital({0.0}, 8.0));
  WaveFunction b = product_state(one, plane_wave_orbital({2.0 * kPi / 8.0}, 8.0));
  WaveFunction pair = product_state(make_grid(1, 2, 16, 8.0), plane_wave_orbital({0.0}, 8.0));
  const Marginal ga = marginal(pair, 1);
  const MeanFieldDistance same = mean_field_distance(ga, a);
  CHECK(same.hilbert_schmidt < 1e-14);
  CHECK(same.trace_norm < 1e-13);
  const MeanFieldDistance orth = mean_field_distance(ga, b);
  CHECK(orth.hilbert_schmidt == doctest::Approx(std::sqrt(2.0)));
  CHECK(orth.trace_norm == doctest::Approx(2.0));
  CHECK_THROWS_AS(mean_field_distance(ga, product_state(make_grid(1, 1, 32, 8.0), plane_wave_orbital({0.0}, 8.0))),
                  Error);
  CHECK(mean_field_coupling(PotentialSpec(PotentialKind::Constant, 1.0, 1.0), make_grid(1, 3, 16, 8.0)) ==
        doctest::Approx(2.0 * 2.0 * 8.0));
}

TEST_CASE("marginal serialization") {
  WaveFunction psi = random_bose_state(make_grid(1, 2, 8, 6.0), 1);
  const Marginal g1 = marginal(psi, 1);
  const std::string path = "marginal_roundtrip.bin";
  write_marginal(path, g1);
  const Marginal back = read_marginal(path);
  CHECK(back.k == 1);
  CHECK(back.M == 8);
  CHECK(back.L == 6.0);
  CHECK(max_dev(back.values, g1.values) == 0.0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_marginal("does_not_exist.bin"), Error);
}
