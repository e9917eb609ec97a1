// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bosedyn/error.hpp"
#include "bosedyn/harness.hpp"

namespace {

using namespace bosedyn;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

int print_summary(const harness::ReportSummary& summary) {
  for (const harness::Verdict& v : summary.verdicts) {
    std::printf("%-4s %-22s measured=%-14.6g bound=%-14.6g margin=%-14.6g%s%s\n", v.pass ? "PASS" : "FAIL",
                v.name.c_str(), v.measured, v.bound, v.margin, v.note.empty() ? "" : "  # ", v.note.c_str());
  }
  std::printf("%s\n", summary.all_pass() ? "all checks passed" : "some checks failed");
  return summary.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Many-boson lattice dynamics: simulation, identity checks and reports"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, checks;
  std::uint64_t seed = 0;
  int dt_refine = 2;
  if (const char* env = std::getenv("BOSEDYN_OUT")) out_dir = env;
  if (out_dir.empty()) out_dir = "out";

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "Evolve the scenario and run the conservation checks"},
      {"diagnose", "Hydrodynamic, Morawetz and action series with their checks"},
      {"verify", "Run the named checks (scenario list or --checks)"},
      {"bbgky", "Marginals, hierarchy residual, collapse bounds and transport"},
      {"meanfield-compare", "Mean-field trend against the Gross-Pitaevskii closure"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", scenario_path, "Scenario file (YAML)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (default $BOSEDYN_OUT or ./out)");
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--checks", checks, "Comma-separated check names");
    sub->add_option("--dt-refine", dt_refine, "Refinement factor for order checks")->check(CLI::Range(2, 16));
    subs.push_back(sub);
  }

  harness::OracleParams op;
  std::string oracle_name;
  CLI::App* oracle = app.add_subcommand("oracle", "Compare an optimized path with its brute-force reference");
  oracle->add_option("name", oracle_name, "Oracle name")->required();
  oracle->add_option("--d", op.d, "Dimension");
  oracle->add_option("--N", op.N, "Particles (<= 3)");
  oracle->add_option("--M", op.M, "Points per axis (<= 16)");
  oracle->add_option("--L", op.L, "Box length");
  oracle->add_option("--seed", op.seed, "Random state seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (oracle->parsed()) {
      const harness::OracleReport r = harness::run_oracle(oracle_name, op);
      std::printf("%s %s deviation=%.6g tolerance=%.3g\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.deviation,
                  r.tolerance);
      return r.pass ? 0 : 1;
    }
    for (CLI::App* sub : subs) {
      if (!sub->parsed()) continue;
      harness::Scenario s = harness::load_scenario(scenario_path);
      if (sub->count("--seed")) s.seed = seed;
      harness::RunOptions opts;
      opts.command = sub->get_name();
      opts.out = out_dir;
      opts.checks = split_list(checks);
      opts.dt_refine = dt_refine;
      const harness::ReportSummary summary = harness::run(s, opts);
      return print_summary(summary);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
