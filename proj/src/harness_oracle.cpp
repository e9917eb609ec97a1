// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "bosedyn/bbgky.hpp"
#include "bosedyn/commutator.hpp"
#include "bosedyn/error.hpp"
#include "bosedyn/harness.hpp"
#include "bosedyn/morawetz.hpp"
#include "bosedyn/oracles.hpp"

namespace bosedyn::harness {

namespace {

/// `floor` is the natural scale of a functional whose reference may vanish
/// identically (sigma in d = 1).
double rel(double got, double ref, double floor) { return std::abs(got - ref) / std::max({std::abs(ref), floor, 1e-300}); }

double rel(const KernelMatrix& got, const KernelMatrix& ref) {
  return (got - ref).cwiseAbs().maxCoeff() / std::max(ref.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace

const std::vector<std::string>& oracle_names() {
  static const std::vector<std::string> names = {"interaction_term", "sigma_term", "correlation_C",
                                                 "marginal", "collision_apply", "S_ds_two_ways"};
  return names;
}

OracleReport run_oracle(const std::string& name, const OracleParams& p) {
  if (std::find(oracle_names().begin(), oracle_names().end(), name) == oracle_names().end())
    throw Error(ErrorCode::UnknownOracle, "unknown oracle '" + name + "'");
  Scenario s;
  s.seed = p.seed;
  s.grid = {p.d, p.N, p.M, p.L};
  const Grid grid = scenario_grid(s);
  oracle::check_budget(grid);
  if (grid.N < 2) throw Error(ErrorCode::InvalidArgument, "oracles need N >= 2");
  const WaveFunction psi = initial_state(s, grid);
  const PotentialSpec spec(PotentialKind::GaussianCore, p.A, p.l);

  const double h1_sq = h1_norm(psi) * h1_norm(psi);
  OracleReport r{name, 0.0, 1e-8, false};
  if (name == "interaction_term") {
    r.deviation = rel(interaction_term(psi, spec), oracle::interaction_term(psi, spec), h1_sq);
  } else if (name == "sigma_term") {
    r.deviation = rel(sigma_term(psi), oracle::sigma_term(psi), h1_sq);
  } else if (name == "correlation_C") {
    r.deviation = rel(correlation_C(psi), oracle::correlation_C(psi), 0.0);
  } else if (name == "marginal") {
    for (int k = 1; k < grid.N; ++k)
      r.deviation = std::max(r.deviation, rel(marginal(psi, k).values, oracle::marginal(psi, k).values));
  } else if (name == "collision_apply") {
    r.deviation = rel(collision_apply(marginal(psi, 2), spec, grid.N).values, oracle::collision_apply(psi, spec).values);
  } else {
    r.tolerance = 1e-6;
    r.deviation = rel(s_ds_fourier(psi), s_ds_direct(psi), 0.0);
  }
  r.pass = r.deviation <= r.tolerance;
  return r;
}

}  // namespace bosedyn::harness
