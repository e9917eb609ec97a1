// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file harness.hpp
 * @brief Scenario files, the named check catalogue, run orchestration and
 *        the brute-force oracle switchboard.
 *
 * Scenario schema (YAML, schema 1):
 *
 *     schema: 1
 *     seed: 7
 *     grid: {d: 1, N: 3, M: 32, L: 16}
 *     potential: {kind: gaussian-core, A: 4, l: 1, scaled: false}   # or kind: free
 *     initial:
 *       kind: random_gaussian   # gaussian | periodic_gaussian | plane_wave | random_gaussian
 *       orbitals: [{center: [0], width: 1, k: [0.5]}]   # or k_modes: [1] (units of 2 pi / L)
 *       spread: 1.5
 *       symmetrize: true
 *     run: {T: 1, dt: 1e-3, stride: 10}
 *     checks: {norm_drift: 1e-10, energy_drift: 1e-6}   # or a list of names
 *
 * Everything except `grid` has a default. Unknown keys are parse errors.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bosedyn/lattice.hpp"
#include "bosedyn/potentials.hpp"

namespace bosedyn::harness {

inline constexpr int kSchemaVersion = 1;

struct GridBlock {
  int d = 1;
  int N = 2;
  int M = 32;
  double L = 16.0;
};

struct PotentialBlock {
  std::string kind = "gaussian-core";  ///< a potential kind name, or "free"
  double A = 4.0;
  double l = 1.0;
  bool scaled = false;  ///< use the member V_N of the scaled family
};

struct OrbitalBlock {
  std::vector<double> center;
  double width = 1.0;
  std::vector<double> k;  ///< wavevector; empty means zero (k_modes n gives k = 2 pi n / L)
};

struct InitialBlock {
  std::string kind = "random_gaussian";
  std::vector<OrbitalBlock> orbitals;  ///< one shared orbital or one per particle
  double spread = 1.5;                 ///< random_gaussian: centers in [-spread, spread]^d
  bool symmetrize = true;
};

struct RunBlock {
  double T = 0.1;
  double dt = 1e-3;
  int stride = 10;
};

struct CheckRequest {
  std::string name;
  double tolerance = 0.0;
};

struct Scenario {
  int schema = kSchemaVersion;
  std::uint64_t seed = 0;
  GridBlock grid;
  PotentialBlock potential;
  InitialBlock initial;
  RunBlock run;
  std::vector<CheckRequest> checks;
};

/// Throws ParseError (with line and column) or ValidationError (naming the field).
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

Grid scenario_grid(const Scenario& s);
PotentialSpec scenario_potential(const Scenario& s);
WaveFunction initial_state(const Scenario& s, const Grid& grid);

struct CheckInfo {
  std::string name;
  std::string group;  ///< conservation, hydro, morawetz, action, bbgky, meanfield, oracle
  double default_tolerance = 0.0;
  std::string description;
};

const std::vector<CheckInfo>& check_catalogue();
const CheckInfo& check_info(const std::string& name);
/// Check names of one group, in catalogue order.
std::vector<std::string> group_checks(const std::string& group);

/// pass iff margin >= -slack. Threshold checks fold the tolerance into
/// `bound` and carry slack 0; sign checks carry slack = tolerance.
struct Verdict {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct ReportSummary {
  std::string command;
  std::map<std::string, std::string> metadata;
  std::string convention_hash;
  std::vector<Verdict> verdicts;

  bool all_pass() const;
};

/// Hash of the convention sheet (signs, weights, pair counting).
std::string convention_hash();

struct RunOptions {
  std::string command = "verify";
  std::filesystem::path out;          ///< empty: no files
  std::vector<std::string> checks;    ///< overrides the scenario and command defaults
  int dt_refine = 2;                  ///< refinement factor for order checks
  bool write_snapshots = true;
  bool write_plots = true;
};

/// Default check list for a subcommand (simulate, diagnose, bbgky, meanfield-compare).
std::vector<std::string> command_checks(const std::string& command);

/// Evolves the scenario, runs every requested check and writes
/// out/{summary.json, series/*.csv, plots/*.svg, snapshots/*.bin}.
ReportSummary run(const Scenario& scenario, const RunOptions& options);

void write_summary_json(const std::filesystem::path& path, const ReportSummary& summary);

struct OracleParams {
  int d = 1;
  int N = 2;
  int M = 8;
  double L = 8.0;
  std::uint64_t seed = 1;
  double A = 4.0;
  double l = 1.0;
};

struct OracleReport {
  std::string name;
  double deviation = 0.0;  ///< max relative deviation, optimized vs reference
  double tolerance = 0.0;
  bool pass = false;
};

const std::vector<std::string>& oracle_names();
/// Throws UnknownOracle for unlisted names and BudgetExceeded outside M <= 16, N <= 3.
OracleReport run_oracle(const std::string& name, const OracleParams& params);

}  // namespace bosedyn::harness
