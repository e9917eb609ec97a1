// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "bosedyn/error.hpp"
#include "bosedyn/harness.hpp"
#include "bosedyn/report.hpp"

namespace bosedyn::harness {

namespace {

const char* const kConventionSheet =
    "i d_t psi = Laplacian psi - V psi; V = sum over ordered pairs a != b of V(|x_a - x_b|); "
    "Strang: half kinetic exp(+i k^2 dt / 2), potential exp(+i V dt); "
    "rho = |psi|^2 / 2; p = Im(conj psi grad psi); force factor 2 for ordered pairs; "
    "integrals weighted h^d per coordinate; first derivatives zero the Nyquist mode; "
    "minimal-image periodic distances; antipodal sign component 0; "
    "gamma_k = sum_Y psi conj psi h^{d(N-k)}; hierarchy coupling 2; "
    "rotated pair variable u = (x_a - x_b) / sqrt(2), K(w) = |w| / sqrt(2); "
    "GP: i d_t phi = Laplacian phi - g |phi|^2 phi + mu phi, g = 2 (N - 1) sum V_N h^d; "
    "scaled family V_N(s) = N^{d-1} V_1(N s)";

}  // namespace

const std::vector<CheckInfo>& check_catalogue() {
  static const std::vector<CheckInfo> catalogue = {
      {"norm_drift", "conservation", 1e-10, "max |‖psi(t)‖ - ‖psi(0)‖|"},
      {"energy_drift", "conservation", 1e-6, "max |E(t) - E(0)|"},
      {"energy_order", "conservation", 0.15, "energy drift ratio under dt refinement, relative deviation from K^2"},
      {"symmetry", "conservation", 1e-10, "max Bose symmetry deviation over samples"},
      {"mass_law_order", "hydro", 0.125, "mass-law residual ratio under dt refinement, relative deviation from K^2"},
      {"momentum_law_order", "hydro", 0.125, "momentum-law residual ratio under dt refinement, relative deviation from K^2"},
      {"mass_law_exact", "hydro", 1e-9, "mass-law residual on free plane-wave and uniform states"},
      {"momentum_law_exact", "hydro", 1e-9, "momentum-law residual on free plane-wave and uniform states"},
      {"interaction_positive", "morawetz", 1e-10, "min interaction term / ‖psi‖_H1^2"},
      {"sigma_positive", "morawetz", 1e-10, "min sigma term / ‖psi‖_H1^2"},
      {"variance_convex", "morawetz", 1e-8, "min second difference of V_D / ‖psi‖_H1^2"},
      {"balance_refinement", "morawetz", 0.3, "balance residual ratio fine / coarse, scaled to K = 2"},
      {"collapsed_inequality", "morawetz", 1e-12, "relative margin of sum integral m_ab <= N^2 ‖psi‖_H1 ‖psi‖_L2"},
      {"shifted_offsets", "morawetz", 0.3, "balance refinement and collapsed inequality for three lattice shifts"},
      {"L_monotone", "action", 1e-8, "min increment of L / scale"},
      {"C_convex", "action", 1e-8, "min second difference of C / scale"},
      {"CL_order", "action", 0.125, "|C' - L| ratio under dt refinement, relative deviation from K^2"},
      {"decomposition", "action", 1e-4, "max |dL/dt - sum S| / sum |S|"},
      {"s_ds_two_ways", "action", 1e-6, "relative gap between direct and Fourier diagonal squares"},
      {"square_estimate", "action", 1e-12, "relative margin of the square estimate"},
      {"L_bound", "action", 1e-12, "1 - max |L| / (‖psi‖_H1 ‖psi‖_L2^3)"},
      {"s_terms_positive", "action", 1e-10, "min analytic-kernel S-term / scale"},
      {"marginal_hermitian", "bbgky", 1e-12, "relative Hermiticity defect of gamma_1, gamma_2"},
      {"marginal_trace", "bbgky", 1e-12, "|trace gamma_k - ‖psi‖^2|"},
      {"marginal_compatible", "bbgky", 1e-12, "relative gap between tr_2 gamma_2 and gamma_1"},
      {"gamma1_psd", "bbgky", 1e-10, "min eigenvalue of gamma_1"},
      {"hierarchy_order", "bbgky", 0.125, "k = 1 hierarchy residual ratio under dt refinement, relative deviation from K^2"},
      {"b2_bound", "bbgky", 1e-12, "relative margin of the finite-N and limit b2 bounds"},
      {"transport_static", "bbgky", 1e-8, "relative gap to the exact characteristic integral for static forcing"},
      {"transport_estimate", "bbgky", 1e-12, "relative margin of sup ‖gamma_hat‖^2 <= T integral ‖B‖^2"},
      {"meanfield_trend", "meanfield", 1e-12, "HS and trace distances to the GP state for N = 2, 3, 4"},
      {"oracle_suite", "oracle", 1e-8, "max relative deviation of optimized paths from brute-force oracles"},
  };
  return catalogue;
}

const CheckInfo& check_info(const std::string& name) {
  for (const CheckInfo& c : check_catalogue())
    if (c.name == name) return c;
  throw Error(ErrorCode::InvalidArgument, "unknown check '" + name + "'");
}

std::vector<std::string> group_checks(const std::string& group) {
  std::vector<std::string> out;
  for (const CheckInfo& c : check_catalogue())
    if (c.group == group) out.push_back(c.name);
  return out;
}

std::vector<std::string> command_checks(const std::string& command) {
  auto cat = [](std::initializer_list<const char*> groups) {
    std::vector<std::string> out;
    for (const char* g : groups)
      for (std::string& n : group_checks(g)) out.push_back(std::move(n));
    return out;
  };
  if (command == "simulate") return cat({"conservation"});
  if (command == "diagnose") return cat({"hydro", "morawetz", "action"});
  if (command == "bbgky") return cat({"bbgky"});
  if (command == "meanfield-compare") return cat({"meanfield"});
  if (command == "verify") return cat({"conservation"});
  throw Error(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
}

bool ReportSummary::all_pass() const {
  for (const Verdict& v : verdicts)
    if (!v.pass) return false;
  return true;
}

std::string convention_hash() {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (const char* p = kConventionSheet; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_summary_json(const std::filesystem::path& path, const ReportSummary& summary) {
  using nlohmann::ordered_json;
  auto number = [](double v) -> ordered_json {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return report::round_significant(v, 12);
  };
  ordered_json j;
  j["command"] = summary.command;
  j["convention_hash"] = summary.convention_hash;
  j["metadata"] = ordered_json::object();
  for (const auto& [k, v] : summary.metadata) j["metadata"][k] = v;
  j["pass"] = summary.all_pass();
  j["verdicts"] = ordered_json::array();
  for (const Verdict& v : summary.verdicts) {
    ordered_json e;
    e["name"] = v.name;
    e["measured"] = number(v.measured);
    e["bound"] = number(v.bound);
    e["margin"] = number(v.margin);
    e["slack"] = number(v.slack);
    e["tolerance"] = number(v.tolerance);
    e["pass"] = v.pass;
    if (!v.note.empty()) e["note"] = v.note;
    j["verdicts"].push_back(std::move(e));
  }
  report::write_text(path, j.dump(2) + "\n");
}

}  // namespace bosedyn::harness
