// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bosedyn/error.hpp"
#include "bosedyn/harness.hpp"
#include "bosedyn/report.hpp"

using namespace bosedyn;
namespace fs = std::filesystem;

namespace {

const char* const kSmall = R"(
schema: 1
seed: 5
grid: {d: 1, N: 2, M: 16, L: 8}
potential: {kind: gaussian-core, A: 4, l: 1}
initial:
  kind: gaussian
  orbitals:
    - {center: [-1], width: 1, k: [0.5]}
    - {center: [1], width: 1, k: [-0.5]}
run: {T: 0.02, dt: 1e-3, stride: 5}
)";

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bosedyn_test_" + name);
  fs::remove_all(p);
  return p;
}

ErrorCode code_of(const std::string& text) {
  try {
    harness::parse_scenario(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

std::string message_of(const std::string& text) {
  try {
    harness::parse_scenario(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal scenario takes defaults") {
  const harness::Scenario s = harness::parse_scenario("grid: {d: 1, N: 2, M: 16, L: 8}\n");
  CHECK(s.schema == harness::kSchemaVersion);
  CHECK(s.potential.kind == "gaussian-core");
  CHECK(s.initial.kind == "random_gaussian");
  CHECK(s.run.stride == 10);
  CHECK(s.checks.empty());
  const Grid g = harness::scenario_grid(s);
  const WaveFunction psi = harness::initial_state(s, g);
  CHECK(std::abs(l2_norm(psi) - 1.0) < 1e-12);
}

TEST_CASE("k_modes are converted to lattice wavevectors") {
  const harness::Scenario s = harness::parse_scenario(
      "grid: {d: 1, N: 1, M: 16, L: 8}\ninitial: {kind: plane_wave, orbitals: [{k_modes: [2]}]}\n");
  CHECK(s.initial.orbitals.at(0).k.at(0) == doctest::Approx(2.0 * 2.0 * kPi / 8.0));
}

TEST_CASE("checks accept a list or a map of tolerances") {
  const harness::Scenario a = harness::parse_scenario("grid: {M: 16}\nchecks: [norm_drift]\n");
  CHECK(a.checks.at(0).tolerance == doctest::Approx(1e-10));
  const harness::Scenario b = harness::parse_scenario("grid: {M: 16}\nchecks: {energy_drift: 1e-5}\n");
  CHECK(b.checks.at(0).tolerance == doctest::Approx(1e-5));
}

TEST_CASE("invalid M is a validation error naming the field") {
  const std::string text = "grid: {d: 1, N: 2, M: 7, L: 8}\n";
  CHECK(code_of(text) == ErrorCode::ValidationError);
  const std::string msg = message_of(text);
  CHECK(msg.find("grid.M") != std::string::npos);
  CHECK(msg.find("M must be a power of two") != std::string::npos);
}

TEST_CASE("unknown keys are parse errors with a location") {
  const std::string text = "grid: {d: 1, N: 2, M: 16, L: 8}\nfoo: 1\n";
  CHECK(code_of(text) == ErrorCode::ParseError);
  const std::string msg = message_of(text);
  CHECK(msg.find("line 2, column 1") != std::string::npos);
  CHECK(msg.find("'foo'") != std::string::npos);
  CHECK(message_of("grid: {d: 1, bogus: 2}\n").find("'grid.bogus'") != std::string::npos);
}

TEST_CASE("other validation failures") {
  CHECK(code_of("grid: {d: 4}\n") == ErrorCode::ValidationError);
  CHECK(code_of("grid: {L: -1}\n") == ErrorCode::ValidationError);
  CHECK(code_of("grid: {M: 16}\npotential: {kind: yukawa}\n") == ErrorCode::ValidationError);
  CHECK(code_of("grid: {M: 16}\nrun: {T: 0.015, dt: 1e-3, stride: 10}\n") == ErrorCode::ValidationError);
  CHECK(code_of("grid: {M: 16}\nchecks: [no_such_check]\n") == ErrorCode::ValidationError);
  CHECK(code_of("grid: {M: 16}\nchecks: {norm_drift: -1}\n") == ErrorCode::ValidationError);
  CHECK(code_of("grid: [1, 2\n") == ErrorCode::ParseError);
  CHECK(code_of("seed: 1\n") == ErrorCode::ValidationError);
}

TEST_CASE("catalogue groups and command defaults") {
  CHECK(harness::group_checks("conservation").size() == 4);
  CHECK(harness::command_checks("simulate") == harness::group_checks("conservation"));
  CHECK(harness::command_checks("bbgky") == harness::group_checks("bbgky"));
  CHECK_THROWS_AS(harness::command_checks("nope"), Error);
  for (const harness::CheckInfo& c : harness::check_catalogue()) CHECK(c.default_tolerance > 0.0);
}

TEST_CASE("free scenario conserves and has vanishing S_pr") {
  std::string text = kSmall;
  text.replace(text.find("gaussian-core"), 13, "free");
  const harness::Scenario s = harness::parse_scenario(text);
  harness::RunOptions o;
  o.out = scratch("free");
  o.checks = {"norm_drift", "energy_drift", "symmetry", "L_bound"};
  o.write_snapshots = false;
  const harness::ReportSummary r = harness::run(s, o);
  CHECK(r.all_pass());

  std::ifstream f(o.out / "series" / "action.csv");
  REQUIRE(f);
  std::string header;
  std::getline(f, header);
  std::vector<std::string> names;
  std::stringstream hs(header);
  for (std::string col; std::getline(hs, col, ',');) names.push_back(col);
  const auto col = std::find(names.begin(), names.end(), "S_pr") - names.begin();
  REQUIRE(col < static_cast<long>(names.size()));
  int rows = 0;
  for (std::string line; std::getline(f, line); ++rows) {
    std::stringstream ls(line);
    std::string cell;
    for (long i = 0; i <= col; ++i) std::getline(ls, cell, ',');
    CHECK(std::stod(cell) == 0.0);
  }
  CHECK(rows == 5);
}

TEST_CASE("runs are deterministic") {
  const harness::Scenario s = harness::parse_scenario(kSmall);
  harness::RunOptions o;
  o.checks = {"norm_drift", "energy_drift", "energy_order"};
  o.out = scratch("det_a");
  harness::run(s, o);
  const fs::path first = o.out;
  o.out = scratch("det_b");
  harness::run(s, o);
  for (const char* f : {"summary.json", "series/observables.csv", "plots/observables.svg"})
    CHECK_MESSAGE(slurp(first / f) == slurp(o.out / f), f);
  CHECK(slurp(first / "snapshots" / "psi_final.bin") == slurp(o.out / "snapshots" / "psi_final.bin"));
}

TEST_CASE("failed checks carry a negative margin") {
  const harness::Scenario s = harness::parse_scenario(std::string(kSmall) + "checks: {energy_drift: 1e-30}\n");
  harness::RunOptions o;
  o.checks = {};
  const harness::ReportSummary r = harness::run(s, o);
  REQUIRE(r.verdicts.size() == 1);
  CHECK_FALSE(r.verdicts[0].pass);
  CHECK(r.verdicts[0].margin < 0.0);
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("oracle switchboard") {
  CHECK_THROWS_AS(harness::run_oracle("unknown", {}), Error);
  try {
    harness::run_oracle("unknown", {});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownOracle);
  }
  harness::OracleParams p;
  p.M = 32;
  CHECK_THROWS_AS(harness::run_oracle("marginal", p), Error);
  for (const std::string& name : {"interaction_term", "marginal", "collision_apply"}) {
    const harness::OracleReport r = harness::run_oracle(name, {});
    CHECK_MESSAGE(r.pass, name);
  }
}

TEST_CASE("summary JSON rounds numbers and spells non-finite values") {
  harness::ReportSummary s;
  s.command = "verify";
  s.convention_hash = harness::convention_hash();
  s.verdicts.push_back({"x", 1.0 / 3.0, std::nan(""), INFINITY, 0.0, 1e-3, true, {}});
  const fs::path p = scratch("json") / "summary.json";
  harness::write_summary_json(p, s);
  const std::string text = slurp(p);
  CHECK(text.find("0.333333333333") != std::string::npos);
  CHECK(text.find("0.3333333333333") == std::string::npos);
  CHECK(text.find("\"nan\"") != std::string::npos);
  CHECK(text.find("\"inf\"") != std::string::npos);
  CHECK(harness::convention_hash().size() == 16);
}

TEST_CASE("csv and svg emitters") {
  const fs::path p = scratch("csv") / "t.csv";
  report::write_csv(p, {{"t", {0.0, 0.5}}, {"y", {1.0, 0.1}}});
  CHECK(slurp(p) == "t,y\n0,1\n0.5,0.10000000000000001\n");
  const std::string svg = report::svg_line_plot("demo", {"t", {0.0, 1.0, 2.0}}, {{"a", {1.0, 2.0, 0.5}}});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("demo") != std::string::npos);
  CHECK(report::round_significant(123.456789, 4) == doctest::Approx(123.5));
}
