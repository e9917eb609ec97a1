// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "bosedyn/error.hpp"
#include "bosedyn/harness.hpp"

namespace bosedyn::harness {

namespace {

std::string where(const YAML::Mark& m) {
  return "line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1);
}

[[noreturn]] void invalid(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::ValidationError, field + ": " + message);
}

void require_map(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) throw Error(ErrorCode::ParseError, where(node.Mark()) + ": " + field + " must be a mapping");
}

void reject_unknown(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key))
      throw Error(ErrorCode::ParseError, where(kv.first.Mark()) + ": unknown key '" + prefix + key + "'");
  }
}

template <class T>
void read(const YAML::Node& parent, const char* key, T& out, const std::string& field) {
  const YAML::Node n = parent[key];
  if (!n) return;
  try {
    out = n.as<T>();
  } catch (const YAML::Exception&) {
    invalid(field, "cannot convert value at " + where(n.Mark()));
  }
}

std::vector<double> read_vector(const YAML::Node& n, const std::string& field) {
  if (!n.IsSequence()) invalid(field, "expected a list at " + where(n.Mark()));
  std::vector<double> out;
  for (const auto& e : n) {
    try {
      out.push_back(e.as<double>());
    } catch (const YAML::Exception&) {
      invalid(field, "cannot convert value at " + where(e.Mark()));
    }
  }
  return out;
}

bool known_initial_kind(const std::string& k) {
  return k == "gaussian" || k == "periodic_gaussian" || k == "plane_wave" || k == "random_gaussian";
}

void validate(Scenario& s) {
  if (s.schema != kSchemaVersion) invalid("schema", "unsupported schema version " + std::to_string(s.schema));
  const GridBlock& g = s.grid;
  if (g.d < 1 || g.d > 3) invalid("grid.d", "d must be 1, 2 or 3");
  if (g.N < 1) invalid("grid.N", "N must be at least 1");
  if (!admissible_points_per_axis(g.M)) invalid("grid.M", "M must be a power of two (or 3 * 2^k)");
  if (!(g.L > 0.0) || !std::isfinite(g.L)) invalid("grid.L", "L must be positive");

  if (s.potential.kind != "free") {
    try {
      parse_potential_kind(s.potential.kind);
    } catch (const Error&) {
      invalid("potential.kind", "unknown potential kind '" + s.potential.kind + "'");
    }
  }
  if (!std::isfinite(s.potential.A)) invalid("potential.A", "amplitude must be finite");
  if (!(s.potential.l > 0.0)) invalid("potential.l", "range must be positive");

  InitialBlock& in = s.initial;
  if (!known_initial_kind(in.kind)) invalid("initial.kind", "unknown orbital kind '" + in.kind + "'");
  if (in.kind != "random_gaussian" && in.orbitals.empty()) invalid("initial.orbitals", "at least one orbital is required");
  if (!in.orbitals.empty() && in.orbitals.size() != 1 && static_cast<int>(in.orbitals.size()) != g.N)
    invalid("initial.orbitals", "give one orbital or one per particle");
  for (std::size_t i = 0; i < in.orbitals.size(); ++i) {
    OrbitalBlock& o = in.orbitals[i];
    const std::string f = "initial.orbitals[" + std::to_string(i) + "]";
    if (o.center.empty()) o.center.assign(g.d, 0.0);
    if (o.k.empty()) o.k.assign(g.d, 0.0);
    if (static_cast<int>(o.center.size()) != g.d) invalid(f + ".center", "needs d components");
    if (static_cast<int>(o.k.size()) != g.d) invalid(f + ".k", "needs d components");
    if (!(o.width > 0.0)) invalid(f + ".width", "width must be positive");
  }
  if (!(in.spread >= 0.0)) invalid("initial.spread", "spread must be nonnegative");

  const RunBlock& r = s.run;
  if (!(r.dt > 0.0)) invalid("run.dt", "dt must be positive");
  if (!(r.T >= 0.0)) invalid("run.T", "T must be nonnegative");
  if (r.stride < 1) invalid("run.stride", "stride must be at least 1");
  const double intervals = r.T / (r.dt * r.stride);
  if (std::abs(intervals - std::round(intervals)) > 1e-9 * std::max(1.0, intervals))
    invalid("run.T", "T must be a multiple of dt * stride");

  for (CheckRequest& c : s.checks) {
    try {
      const CheckInfo& info = check_info(c.name);
      if (c.tolerance == 0.0) c.tolerance = info.default_tolerance;
    } catch (const Error&) {
      invalid("checks." + c.name, "unknown check");
    }
    if (!(c.tolerance > 0.0)) invalid("checks." + c.name, "tolerance must be positive");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::ParseError, where(e.mark) + ": " + e.msg);
  }
  if (!root || root.IsNull()) throw Error(ErrorCode::ParseError, "line 1, column 1: empty scenario");
  require_map(root, "scenario");
  reject_unknown(root, {"schema", "seed", "grid", "potential", "initial", "run", "checks"}, "");

  Scenario s;
  read(root, "schema", s.schema, "schema");
  read(root, "seed", s.seed, "seed");

  const YAML::Node grid = root["grid"];
  if (!grid) invalid("grid", "the grid block is required");
  require_map(grid, "grid");
  reject_unknown(grid, {"d", "N", "M", "L"}, "grid.");
  read(grid, "d", s.grid.d, "grid.d");
  read(grid, "N", s.grid.N, "grid.N");
  read(grid, "M", s.grid.M, "grid.M");
  read(grid, "L", s.grid.L, "grid.L");

  if (const YAML::Node p = root["potential"]) {
    require_map(p, "potential");
    reject_unknown(p, {"kind", "A", "l", "scaled"}, "potential.");
    read(p, "kind", s.potential.kind, "potential.kind");
    read(p, "A", s.potential.A, "potential.A");
    read(p, "l", s.potential.l, "potential.l");
    read(p, "scaled", s.potential.scaled, "potential.scaled");
  }

  if (const YAML::Node in = root["initial"]) {
    require_map(in, "initial");
    reject_unknown(in, {"kind", "orbitals", "spread", "symmetrize"}, "initial.");
    read(in, "kind", s.initial.kind, "initial.kind");
    read(in, "spread", s.initial.spread, "initial.spread");
    read(in, "symmetrize", s.initial.symmetrize, "initial.symmetrize");
    if (const YAML::Node orbs = in["orbitals"]) {
      if (!orbs.IsSequence()) invalid("initial.orbitals", "expected a list at " + where(orbs.Mark()));
      for (std::size_t i = 0; i < orbs.size(); ++i) {
        const YAML::Node o = orbs[i];
        const std::string f = "initial.orbitals[" + std::to_string(i) + "]";
        require_map(o, f);
        reject_unknown(o, {"center", "width", "k", "k_modes"}, f + ".");
        OrbitalBlock ob;
        if (o["center"]) ob.center = read_vector(o["center"], f + ".center");
        read(o, "width", ob.width, f + ".width");
        if (o["k"] && o["k_modes"]) invalid(f, "give k or k_modes, not both");
        if (o["k"]) ob.k = read_vector(o["k"], f + ".k");
        if (o["k_modes"]) {
          ob.k = read_vector(o["k_modes"], f + ".k_modes");
          for (double& k : ob.k) k *= 2.0 * kPi / s.grid.L;
        }
        s.initial.orbitals.push_back(std::move(ob));
      }
    }
  }

  if (const YAML::Node r = root["run"]) {
    require_map(r, "run");
    reject_unknown(r, {"T", "dt", "stride"}, "run.");
    read(r, "T", s.run.T, "run.T");
    read(r, "dt", s.run.dt, "run.dt");
    read(r, "stride", s.run.stride, "run.stride");
  }

  if (const YAML::Node c = root["checks"]) {
    if (c.IsSequence()) {
      for (const auto& e : c) s.checks.push_back({e.as<std::string>(), 0.0});
    } else if (c.IsMap()) {
      for (const auto& kv : c) {
        CheckRequest req{kv.first.as<std::string>(), 0.0};
        if (!kv.second.IsNull()) read(c, req.name.c_str(), req.tolerance, "checks." + req.name);
        if (req.tolerance == 0.0 && !kv.second.IsNull()) invalid("checks." + req.name, "tolerance must be positive");
        s.checks.push_back(req);
      }
    } else {
      throw Error(ErrorCode::ParseError, where(c.Mark()) + ": checks must be a list or a mapping");
    }
  }

  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

Grid scenario_grid(const Scenario& s) { return make_grid(s.grid.d, s.grid.N, s.grid.M, s.grid.L); }

PotentialSpec scenario_potential(const Scenario& s) {
  if (s.potential.kind == "free") return free_potential();
  PotentialSpec base(parse_potential_kind(s.potential.kind), s.potential.A, s.potential.l);
  if (!s.potential.scaled) return base;
  return ScaledFamily{base, s.grid.N, s.grid.d}.member();
}

WaveFunction initial_state(const Scenario& s, const Grid& grid) {
  std::vector<Orbital> orbs;
  const InitialBlock& in = s.initial;
  if (in.kind == "random_gaussian") {
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int a = 0; a < grid.N; ++a) {
      std::vector<double> c(grid.d), k(grid.d);
      for (int j = 0; j < grid.d; ++j) {
        c[j] = in.spread * u(rng);
        k[j] = u(rng);
      }
      orbs.push_back(gaussian_orbital(c, 0.9 + 0.2 * u(rng), k));
    }
  } else {
    for (const OrbitalBlock& o : in.orbitals) {
      if (in.kind == "gaussian") orbs.push_back(gaussian_orbital(o.center, o.width, o.k));
      else if (in.kind == "periodic_gaussian") orbs.push_back(periodic_gaussian_orbital(o.center, o.width, grid.L, o.k));
      else orbs.push_back(plane_wave_orbital(o.k, grid.L));
    }
  }
  WaveFunction psi = orbs.size() == 1 ? product_state(grid, orbs.front()) : product_state(grid, orbs);
  if (in.symmetrize && !psi.symmetric) psi = symmetrize(psi);
  return psi;
}

}  // namespace bosedyn::harness
