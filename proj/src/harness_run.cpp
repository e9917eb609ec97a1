// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>

#include "bosedyn/bbgky.hpp"
#include "bosedyn/commutator.hpp"
#include "bosedyn/error.hpp"
#include "bosedyn/harness.hpp"
#include "bosedyn/hydrodynamics.hpp"
#include "bosedyn/morawetz.hpp"
#include "bosedyn/propagator.hpp"
#include "bosedyn/report.hpp"

namespace bosedyn::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kTransportBudgetBytes = std::size_t{512} << 20;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Verdict threshold(const std::string& name, double measured, double tol) {
  Verdict v{name, measured, tol, tol - measured, 0.0, tol, false, {}};
  v.pass = v.margin >= 0.0;
  return v;
}

Verdict sign_check(const std::string& name, double measured, double tol) {
  Verdict v{name, measured, 0.0, measured, tol, tol, false, {}};
  v.pass = v.margin >= -tol;
  return v;
}

double rel_margin(double margin, double bound) { return bound > 0.0 ? margin / bound : margin; }

struct Residual {
  double value = 0.0;
  double scale = 0.0;
};

class Context {
 public:
  Context(const Scenario& s, const RunOptions& o)
      : s_(s), opt_(o), grid_(scenario_grid(s)), spec_(scenario_potential(s)), psi0_(initial_state(s, grid_)) {
    if (opt_.dt_refine < 2) throw Error(ErrorCode::InvalidArgument, "dt refinement factor must be at least 2");
  }

  const Scenario& s_;
  const RunOptions& opt_;
  Grid grid_;
  PotentialSpec spec_;
  WaveFunction psi0_;

  std::optional<Trajectory> coarse_, fine_;
  std::optional<BalanceReport> bal_c_, bal_f_;
  std::optional<ActionReport> act_c_, act_f_;
  std::optional<Marginal> gamma1_final_, gamma2_final_;
  std::vector<report::Column> hierarchy_cols_, meanfield_cols_;

  int K() const { return opt_.dt_refine; }

  EvolveOptions evolve_options() const {
    EvolveOptions eo;
    eo.stride = s_.run.stride;
    return eo;
  }
  const Trajectory& coarse() {
    if (!coarse_) coarse_ = evolve(psi0_, spec_, s_.run.T, s_.run.dt, evolve_options());
    return *coarse_;
  }
  const Trajectory& fine() {
    if (!fine_) fine_ = evolve(psi0_, spec_, s_.run.T, s_.run.dt / K(), evolve_options());
    return *fine_;
  }
  const BalanceReport& balance_coarse() {
    if (!bal_c_) bal_c_ = estimate_balance(coarse(), spec_);
    return *bal_c_;
  }
  const BalanceReport& balance_fine() {
    if (!bal_f_) bal_f_ = estimate_balance(fine(), spec_);
    return *bal_f_;
  }
  const ActionReport& action_coarse() {
    if (!act_c_) act_c_ = action_series(coarse(), spec_);
    return *act_c_;
  }
  const ActionReport& action_fine() {
    if (!act_f_) act_f_ = action_series(fine(), spec_);
    return *act_f_;
  }

  void need_pairs(const char* group) const {
    if (grid_.N < 2) throw Error(ErrorCode::InvalidArgument, std::string(group) + " checks need N >= 2");
  }

  /// Interior coarse samples probed by the order checks.
  std::vector<std::size_t> probe_indices() {
    const std::size_t n = coarse().snapshots.size();
    if (n < 3) throw Error(ErrorCode::InsufficientSnapshots, "order checks need at least three samples");
    std::set<std::size_t> idx{1, (n - 1) / 2, n - 2};
    idx.erase(0);
    return {idx.begin(), idx.end()};
  }

  Verdict order_check(const std::string& name, double tol,
                      const std::function<Residual(const Trajectory&, std::size_t)>& residual) {
    const double expected = static_cast<double>(K()) * K();
    double worst = -1.0, worst_ratio = expected;
    int measured_points = 0;
    for (std::size_t i : probe_indices()) {
      const Residual rc = residual(coarse(), i);
      if (rc.value <= 1e-11 * rc.scale) continue;
      const Residual rf = residual(fine(), static_cast<std::size_t>(K()) * i);
      const double ratio = rc.value / rf.value;
      const double dev = std::abs(ratio / expected - 1.0);
      ++measured_points;
      if (!(dev <= worst)) worst = dev, worst_ratio = ratio;
    }
    Verdict v{name, worst_ratio, expected, 0.0, 0.0, tol, false, {}};
    if (measured_points == 0) {
      v.note = "residuals at rounding level; order not measurable";
      v.pass = true;
      return v;
    }
    v.margin = tol - worst;
    v.pass = v.margin >= 0.0;
    v.note = "worst of " + std::to_string(measured_points) + " probes; margin is relative";
    return v;
  }

  // ------------------------------------------------------------ conservation

  Verdict conservation(const std::string& name, double tol) {
    auto energy_drift = [](const Trajectory& t) {
      const double e0 = t.samples.front().e_kin + t.samples.front().e_pot;
      double m = 0.0;
      for (const Sample& x : t.samples) m = std::max(m, std::abs(x.e_kin + x.e_pot - e0));
      return m;
    };
    if (name == "norm_drift") {
      double m = 0.0;
      for (const Sample& x : coarse().samples) m = std::max(m, std::abs(x.l2 - coarse().samples.front().l2));
      return threshold(name, m, tol);
    }
    if (name == "energy_drift") return threshold(name, energy_drift(coarse()), tol);
    if (name == "energy_order") {
      const double dc = energy_drift(coarse());
      const double e0 = std::abs(coarse().samples.front().e_kin + coarse().samples.front().e_pot);
      const double expected = static_cast<double>(K()) * K();
      if (dc <= 1e-11 * std::max(1.0, e0)) {
        Verdict v{name, dc, expected, 0.0, 0.0, tol, true, "energy drift at rounding level; order not measurable"};
        return v;
      }
      const double ratio = dc / energy_drift(fine());
      Verdict v{name, ratio, expected, tol - std::abs(ratio / expected - 1.0), 0.0, tol, false, "margin is relative"};
      v.pass = v.margin >= 0.0;
      return v;
    }
    double m = 0.0;
    for (const WaveFunction& p : coarse().snapshots) m = std::max(m, symmetry_report(p).max_deviation);
    return threshold(name, m, tol);
  }

  // ------------------------------------------------------------ hydro

  Verdict hydro(const std::string& name, double tol) {
    if (name == "mass_law_order")
      return order_check(name, tol, [](const Trajectory& t, std::size_t i) {
        const LawResidual r = mass_residual(t, i);
        return Residual{r.sup, r.scale};
      });
    if (name == "momentum_law_order")
      return order_check(name, tol, [this](const Trajectory& t, std::size_t i) {
        const LawResidual r = momentum_residual(t, i, spec_);
        return Residual{r.sup, r.scale};
      });
    // Free plane wave with the lowest box mode on axis 0, and the uniform state.
    std::vector<double> k(grid_.d, 0.0);
    k[0] = 2.0 * kPi / grid_.L;
    double m = 0.0;
    for (const WaveFunction& psi : {product_state(grid_, plane_wave_orbital(k, grid_.L)),
                                    product_state(grid_, plane_wave_orbital(std::vector<double>(grid_.d, 0.0), grid_.L))}) {
      const Trajectory t = evolve(psi, free_potential(), 2.0 * s_.run.dt, s_.run.dt);
      m = std::max(m, name == "mass_law_exact" ? mass_residual(t, 1).sup : momentum_residual(t, 1, free_potential()).sup);
    }
    return threshold(name, m, tol);
  }

  // ------------------------------------------------------------ morawetz

  static double balance_ratio(const BalanceReport& c, const BalanceReport& f, double scale, bool* at_floor) {
    *at_floor = f.balance_residual <= 1e-10 * scale;
    return c.balance_residual > 0.0 ? f.balance_residual / c.balance_residual : 0.0;
  }

  Verdict morawetz(const std::string& name, double tol) {
    need_pairs("morawetz");
    const BalanceReport& c = balance_coarse();
    if (name == "interaction_positive") return sign_check(name, c.interaction_min, tol);
    if (name == "sigma_positive") return sign_check(name, c.sigma_min, tol);
    if (name == "variance_convex") return sign_check(name, c.convexity_min, tol);
    const double h1 = c.series.samples.front().h1;
    const double refine_bound = tol * 4.0 / (static_cast<double>(K()) * K());
    if (name == "balance_refinement") {
      bool floor = false;
      const double ratio = balance_ratio(c, balance_fine(), h1 * h1, &floor);
      Verdict v{name, ratio, refine_bound, refine_bound - ratio, 0.0, tol, false, {}};
      if (floor) v.margin = std::max(v.margin, 0.0), v.note = "fine residual at the spectral floor";
      v.pass = v.margin >= 0.0;
      return v;
    }
    if (name == "collapsed_inequality") {
      Verdict v = sign_check(name, rel_margin(c.inequality_margin, c.collapsed_bound), tol);
      v.measured = c.collapsed_total;
      v.bound = c.collapsed_bound;
      v.note = "margin is relative to the bound; c_d sum = " + fmt_short(c.collapsed_scaled);
      return v;
    }
    // shifted_offsets
    std::mt19937_64 rng(s_.seed + 17);
    std::uniform_int_distribution<int> u(-std::max(1, grid_.M / 4), std::max(1, grid_.M / 4));
    double worst_margin = kInf, worst_ratio = 0.0;
    std::string note = "shifts";
    for (int trial = 0; trial < 3; ++trial) {
      LatticeShift shift(grid_.d, 0);
      while (std::all_of(shift.begin(), shift.end(), [](int x) { return x == 0; }))
        for (int& x : shift) x = u(rng);
      const BalanceReport sc = estimate_balance(coarse(), spec_, shift);
      const BalanceReport sf = estimate_balance(fine(), spec_, shift);
      bool floor = false;
      const double ratio = balance_ratio(sc, sf, h1 * h1, &floor);
      double margin = floor ? 0.0 : refine_bound - ratio;
      margin = std::min(margin, rel_margin(sc.inequality_margin, sc.collapsed_bound));
      note += " (";
      for (int j = 0; j < grid_.d; ++j) note += (j ? "," : "") + std::to_string(shift[j]);
      note += ")";
      if (margin < worst_margin) worst_margin = margin, worst_ratio = ratio;
    }
    Verdict v{name, worst_ratio, refine_bound, worst_margin, 0.0, tol, worst_margin >= 0.0, note};
    return v;
  }

  // ------------------------------------------------------------ action

  Verdict action(const std::string& name, double tol) {
    need_pairs("action");
    if (name == "s_ds_two_ways") {
      double m = 0.0;
      for (const WaveFunction* p : {&coarse().snapshots.front(), &coarse().snapshots.back()}) {
        const double direct = s_ds_direct(*p);
        m = std::max(m, std::abs(s_ds_fourier(*p) - direct) / direct);
      }
      return threshold(name, m, tol);
    }
    const ActionReport& r = action_coarse();
    if (name == "L_monotone") return sign_check(name, r.L_min_increment, tol);
    if (name == "C_convex") return sign_check(name, r.C_convexity_min, tol);
    if (name == "decomposition") {
      Verdict v = threshold(name, r.decomposition_residual, tol);
      v.note = "time-differenced variant " + fmt_short(r.decomposition_residual_fd);
      return v;
    }
    if (name == "square_estimate") {
      Verdict v = sign_check(name, rel_margin(r.square_margin, r.square_rhs), tol);
      v.measured = r.square_lhs;
      v.bound = r.square_rhs;
      v.note = "margin is relative to the bound";
      return v;
    }
    if (name == "L_bound") {
      Verdict v = sign_check(name, 1.0 - r.L_bound_ratio_max, tol);
      v.measured = r.L_bound_ratio_max;
      v.bound = 1.0;
      return v;
    }
    if (name == "s_terms_positive") return sign_check(name, r.positivity_min_B, tol);
    // CL_order
    const double expected = static_cast<double>(K()) * K();
    const double rc = r.CL_residual, rf = action_fine().CL_residual;
    if (rc <= 1e-12) return {name, rc, expected, 0.0, 0.0, tol, true, "residual at rounding level; order not measurable"};
    const double ratio = rc / rf;
    Verdict v{name, ratio, expected, tol - std::abs(ratio / expected - 1.0), 0.0, tol, false, "margin is relative"};
    v.pass = v.margin >= 0.0;
    return v;
  }

  // ------------------------------------------------------------ bbgky

  Verdict transport_static(const std::string& name, double tol) {
    const Marginal B = b2_collapse(marginal(psi0_, 2), 1.0);
    const TransportField bh = transport_transform(B);
    const int d = grid_.d;
    const Spectral& sp = Spectral::get(std::vector<int>(static_cast<std::size_t>(d), grid_.M), grid_.L);
    const std::size_t q = sp.size();
    std::vector<ComplexField> zhat(q, ComplexField(q));
    std::vector<double> rate(q * q);
    double amp = 0.0, weighted = 0.0;
    for (std::size_t v = 0; v < q; ++v) {
      sp.forward(&bh.values[v * q], zhat[v].data());
      for (std::size_t m = 0; m < q; ++m) {
        double r = 0.0;
        for (int a = 0; a < d; ++a) r += sp.wavenumber(sp.mode_index(m, a), a) * sp.wavenumber(sp.mode_index(v, a), a);
        rate[v * q + m] = r;
        amp = std::max(amp, std::abs(zhat[v][m]));
        weighted = std::max(weighted, r * r * std::abs(zhat[v][m]));
      }
    }
    // Trapezoid error of mode (v, m) is about T dt^2 rate^2 |B_hat| / 12; keep it
    // near 1e-9 of T max |B_hat|.
    const double dt = weighted > 0.0 ? std::sqrt(12e-9 * amp / weighted) : 1e-3;
    const std::size_t field_bytes = q * q * sizeof(cplx);
    const std::size_t n = std::clamp<std::size_t>(kTransportBudgetBytes / (2 * field_bytes), 20, 4000) - 1;
    const double T = static_cast<double>(n) * dt;
    std::vector<TransportField> forcing(n + 1, bh);
    for (std::size_t j = 0; j <= n; ++j) forcing[j].t = static_cast<double>(j) * dt;
    const TransportResult res = transport_solve(forcing, T, dt);

    ComplexField hat(q), out(q);
    double err = 0.0, ref = 0.0;
    for (std::size_t v = 0; v < q; ++v) {
      for (std::size_t m = 0; m < q; ++m) {
        const double r = rate[v * q + m];
        hat[m] = zhat[v][m] * (r == 0.0 ? cplx(T) : (1.0 - std::polar(1.0, -r * T)) / cplx(0.0, r));
      }
      sp.inverse(hat.data(), out.data());
      for (std::size_t z = 0; z < q; ++z) {
        err = std::max(err, std::abs(res.fields.back().values[v * q + z] - out[z]));
        ref = std::max(ref, std::abs(out[z]));
      }
    }
    double max_phase = 0.0;
    for (double r : rate) max_phase = std::max(max_phase, std::abs(r) * T);
    Verdict v = threshold(name, ref > 0.0 ? err / ref : 0.0, tol);
    v.note = "horizon " + fmt_short(T) + " with " + std::to_string(n) + " steps, largest shift phase " +
             fmt_short(max_phase) + "; relative to max |gamma_hat|";
    return v;
  }

  Verdict transport_estimate(const std::string& name, double tol) {
    const Trajectory& t = coarse();
    const std::size_t n = t.snapshots.size() - 1;
    std::size_t every = std::max<std::size_t>(1, (n + 19) / 20);
    while (n % every != 0) --every;
    std::vector<TransportField> forcing;
    for (std::size_t j = 0; j <= n; j += every) {
      Marginal B = collision_apply(marginal(t.snapshots[j], 2), spec_, grid_.N);
      B.values *= kOrderedPairForceFactor;
      TransportField f = transport_transform(B);
      f.t = static_cast<double>(j / every) * t.sample_dt() * static_cast<double>(every);
      forcing.push_back(std::move(f));
    }
    const double T = s_.run.T;
    const TransportResult r = transport_solve(forcing, T, t.sample_dt() * static_cast<double>(every));
    Verdict v = sign_check(name, rel_margin(r.margin_scaled, T * r.forcing_integral), tol);
    v.measured = r.sup_norm_sq;
    v.bound = T * r.forcing_integral;
    v.note = "margin is relative; unscaled margin " + fmt_short(r.margin) + (T <= 1.0 ? "" : " (not claimed for T > 1)");
    return v;
  }

  Verdict bbgky(const std::string& name, double tol) {
    need_pairs("bbgky");
    if (name == "transport_static") return transport_static(name, tol);
    if (name == "transport_estimate") return transport_estimate(name, tol);
    if (name == "hierarchy_order") {
      Verdict v = order_check(name, tol, [this](const Trajectory& t, std::size_t i) {
        const HierarchyResidual r = hierarchy_residual_k1(t, i, spec_);
        if (&t == &*coarse_) {
          if (hierarchy_cols_.empty()) hierarchy_cols_ = {{"t", {}}, {"sup", {}}, {"scale", {}}};
          hierarchy_cols_[0].values.push_back(r.t);
          hierarchy_cols_[1].values.push_back(r.sup);
          hierarchy_cols_[2].values.push_back(r.scale);
        }
        return Residual{r.sup, r.scale};
      });
      return v;
    }

    double herm = 0.0, trace = 0.0, compat = 0.0, psd = kInf, b2 = kInf;
    std::string b2_note;
    const double g = mean_field_coupling(spec_, grid_);
    for (const WaveFunction* p : {&coarse().snapshots.front(), &coarse().snapshots.back()}) {
      const double norm_sq = l2_norm(*p) * l2_norm(*p);
      Marginal g1 = marginal(*p, 1), g2 = marginal(*p, 2);
      const MarginalReport r1 = check_marginal(g1, norm_sq);
      const MarginalReport r2 = check_marginal(g2, norm_sq, &g1);
      herm = std::max({herm, r1.hermiticity, r2.hermiticity});
      trace = std::max({trace, r1.trace_error, r2.trace_error});
      compat = std::max(compat, r2.compatibility);
      psd = std::min(psd, r1.psd_min_eig);
      if (name == "b2_bound") {
        const B2Bound fin = finite_n_b2(g2, spec_, grid_.N);
        const B2Bound lim = limit_b2(g2, g != 0.0 ? g : 1.0);
        b2 = std::min({b2, rel_margin(fin.margin, fin.bound), rel_margin(lim.margin, lim.bound)});
        b2_note += (b2_note.empty() ? "" : "; ") + std::string("t=") + fmt_short(p->t) + " finite ratio " +
                   fmt_short(fin.ratio) + ", limit ratio " + fmt_short(lim.ratio);
      }
      if (p == &coarse().snapshots.back()) gamma1_final_ = std::move(g1), gamma2_final_ = std::move(g2);
    }
    if (name == "marginal_hermitian") return threshold(name, herm, tol);
    if (name == "marginal_trace") return threshold(name, trace, tol);
    if (name == "marginal_compatible") return threshold(name, compat, tol);
    if (name == "gamma1_psd") return sign_check(name, psd, tol);
    Verdict v = sign_check(name, b2, tol);
    v.note = "relative margins; empirical constants: " + b2_note;
    return v;
  }

  // ------------------------------------------------------------ mean field and oracles

  Verdict meanfield(const std::string& name, double tol) {
    const PotentialSpec base = s_.potential.kind == "free"
                                   ? free_potential()
                                   : PotentialSpec(parse_potential_kind(s_.potential.kind), s_.potential.A, s_.potential.l);
    Orbital phi0;
    const std::vector<double> zero(grid_.d, 0.0);
    if (s_.initial.orbitals.empty()) phi0 = gaussian_orbital(zero, 1.0, zero);
    else {
      const OrbitalBlock& o = s_.initial.orbitals.front();
      if (s_.initial.kind == "periodic_gaussian") phi0 = periodic_gaussian_orbital(o.center, o.width, grid_.L, o.k);
      else if (s_.initial.kind == "plane_wave") phi0 = plane_wave_orbital(o.k, grid_.L);
      else phi0 = gaussian_orbital(o.center, o.width, o.k);
    }
    TrendOptions opts;
    opts.d = grid_.d;
    opts.M = grid_.M;
    opts.L = grid_.L;
    opts.T = s_.run.T;
    opts.dt = s_.run.dt;
    const std::vector<TrendPoint> trend = mean_field_trend(base, phi0, opts);
    meanfield_cols_ = {{"N", {}}, {"g", {}}, {"t", {}}, {"hilbert_schmidt", {}}, {"trace_norm", {}}};
    bool ok = true;
    std::string note = "no rate asserted; HS distance at t = " + fmt_short(opts.T) + ":";
    for (std::size_t i = 0; i < trend.size(); ++i) {
      const TrendPoint& p = trend[i];
      ok = ok && std::isfinite(p.distance.hilbert_schmidt) && std::isfinite(p.distance.trace_norm) &&
           (i == 0 || p.N > trend[i - 1].N);
      note += " N=" + std::to_string(p.N) + " " + fmt_short(p.distance.hilbert_schmidt);
    }
    for (const TrendPoint& p : trend) {
      meanfield_cols_[0].values.push_back(p.N);
      meanfield_cols_[1].values.push_back(p.g);
      meanfield_cols_[2].values.push_back(p.t);
      meanfield_cols_[3].values.push_back(p.distance.hilbert_schmidt);
      meanfield_cols_[4].values.push_back(p.distance.trace_norm);
    }
    Verdict v{name, trend.empty() ? 0.0 : trend.back().distance.hilbert_schmidt, kInf, ok ? 0.0 : -kInf, tol, tol, ok, note};
    return v;
  }

  Verdict oracles(const std::string& name, double tol) {
    const std::vector<OracleParams> instances = {{1, 2, 16, 8.0, s_.seed, 4.0, 1.0},
                                                 {1, 3, 8, 6.0, s_.seed + 1, 4.0, 1.0},
                                                 {2, 2, 8, 8.0, s_.seed + 2, 4.0, 1.0}};
    double worst = 0.0;
    std::string worst_name;
    for (const OracleParams& p : instances)
      for (const std::string& o : oracle_names()) {
        if (o == "S_ds_two_ways") continue;
        const OracleReport r = run_oracle(o, p);
        if (r.deviation >= worst) worst = r.deviation, worst_name = o;
      }
    Verdict v = threshold(name, worst, tol);
    v.note = "largest deviation from " + worst_name;
    return v;
  }

  Verdict dispatch(const CheckRequest& req) {
    const std::string group = check_info(req.name).group;
    try {
      if (group == "conservation") return conservation(req.name, req.tolerance);
      if (group == "hydro") return hydro(req.name, req.tolerance);
      if (group == "morawetz") return morawetz(req.name, req.tolerance);
      if (group == "action") return action(req.name, req.tolerance);
      if (group == "bbgky") return bbgky(req.name, req.tolerance);
      if (group == "meanfield") return meanfield(req.name, req.tolerance);
      return oracles(req.name, req.tolerance);
    } catch (const Error& e) {
      return {req.name, std::nan(""), std::nan(""), -kInf, 0.0, req.tolerance, false, group + ": " + e.what()};
    }
  }
};

std::vector<CheckRequest> resolve_checks(const Scenario& s, const RunOptions& o) {
  auto tolerance = [&](const std::string& name) {
    for (const CheckRequest& c : s.checks)
      if (c.name == name) return c.tolerance;
    return check_info(name).default_tolerance;
  };
  std::vector<std::string> names = o.checks;
  if (names.empty() && o.command == "verify")
    for (const CheckRequest& c : s.checks) names.push_back(c.name);
  if (names.empty()) names = command_checks(o.command);
  std::vector<CheckRequest> out;
  for (const std::string& n : names) {
    try {
      check_info(n);
    } catch (const Error&) {
      throw Error(ErrorCode::ValidationError, "checks." + n + ": unknown check");
    }
    out.push_back({n, tolerance(n)});
  }
  return out;
}

void write_outputs(Context& ctx, const ReportSummary& summary) {
  const std::filesystem::path& out = ctx.opt_.out;
  using report::Column;
  if (ctx.coarse_) {
    const Trajectory& t = *ctx.coarse_;
    Column tc{"t", {}}, l2{"l2", {}}, h1{"h1", {}}, ek{"e_kin", {}}, ep{"e_pot", {}}, e{"energy", {}}, b{"boundary", {}};
    Column de{"energy_drift", {}}, dn{"norm_drift", {}};
    for (const Sample& x : t.samples) {
      tc.values.push_back(x.t);
      l2.values.push_back(x.l2);
      h1.values.push_back(x.h1);
      ek.values.push_back(x.e_kin);
      ep.values.push_back(x.e_pot);
      e.values.push_back(x.e_kin + x.e_pot);
      b.values.push_back(x.boundary);
      de.values.push_back(e.values.back() - e.values.front());
      dn.values.push_back(x.l2 - l2.values.front());
    }
    report::write_csv(out / "series" / "observables.csv", {tc, l2, h1, ek, ep, e, b});
    if (ctx.opt_.write_plots) report::write_text(out / "plots" / "observables.svg", report::svg_line_plot("drifts", tc, {de, dn}));
    if (ctx.opt_.write_snapshots) {
      std::filesystem::create_directories(out / "snapshots");
      write_snapshot((out / "snapshots" / "psi_initial.bin").string(), t.snapshots.front());
      write_snapshot((out / "snapshots" / "psi_final.bin").string(), t.snapshots.back());
    }
  }
  if (ctx.act_c_) {
    std::vector<Column> cols = {{"t", {}},      {"L", {}},      {"C", {}},      {"S_cm", {}},   {"S_cv", {}},
                                {"S_ds", {}},   {"S_pr", {}},   {"L_dot", {}},  {"L_analytic", {}}, {"S_cm_B", {}},
                                {"S_cv_B", {}}, {"S_ds_B", {}}, {"S_pr_B", {}}, {"S_ds_square", {}}};
    for (const ActionTerms& a : ctx.act_c_->samples) {
      const double row[] = {a.t,    a.L,      a.C,      a.S_cm,   a.S_cv,   a.S_ds,   a.S_pr,
                            a.L_dot, a.L_analytic, a.S_cm_B, a.S_cv_B, a.S_ds_B, a.S_pr_B, a.S_ds_square};
      for (std::size_t j = 0; j < cols.size(); ++j) cols[j].values.push_back(row[j]);
    }
    report::write_csv(out / "series" / "action.csv", cols);
    if (ctx.opt_.write_plots)
      report::write_text(out / "plots" / "action.svg",
                         report::svg_line_plot("action and correlation", cols[0], {cols[1], cols[2], cols[3], cols[4], cols[5], cols[6]}));
  }
  if (ctx.bal_c_) {
    std::vector<Column> cols = {{"t", {}}, {"m_total", {}}, {"interaction", {}}, {"sigma", {}}, {"V_D", {}}, {"boundary", {}}};
    for (const MorawetzSample& m : ctx.bal_c_->series.samples) {
      double total = 0.0;
      for (double x : m.m) total += x;
      const double row[] = {m.t, total, m.interaction, m.sigma, m.variance, m.weak.boundary};
      for (std::size_t j = 0; j < cols.size(); ++j) cols[j].values.push_back(row[j]);
    }
    report::write_csv(out / "series" / "morawetz.csv", cols);
    if (ctx.opt_.write_plots)
      report::write_text(out / "plots" / "morawetz.svg", report::svg_line_plot("collapsed mass and variance", cols[0], {cols[1], cols[4]}));
  }
  if (!ctx.hierarchy_cols_.empty()) report::write_csv(out / "series" / "hierarchy.csv", ctx.hierarchy_cols_);
  if (!ctx.meanfield_cols_.empty()) {
    report::write_csv(out / "series" / "meanfield.csv", ctx.meanfield_cols_);
    if (ctx.opt_.write_plots)
      report::write_text(out / "plots" / "meanfield.svg",
                         report::svg_line_plot("distance to the GP state", ctx.meanfield_cols_[0],
                                               {ctx.meanfield_cols_[3], ctx.meanfield_cols_[4]}));
  }
  if (ctx.opt_.write_snapshots && ctx.gamma1_final_) {
    std::filesystem::create_directories(out / "snapshots");
    write_marginal((out / "snapshots" / "gamma1_final.bin").string(), *ctx.gamma1_final_);
    write_marginal((out / "snapshots" / "gamma2_final.bin").string(), *ctx.gamma2_final_);
  }
  write_summary_json(out / "summary.json", summary);
}

}  // namespace

ReportSummary run(const Scenario& scenario, const RunOptions& options) {
  const std::vector<CheckRequest> requests = resolve_checks(scenario, options);
  Context ctx(scenario, options);
  ReportSummary summary;
  summary.command = options.command;
  summary.convention_hash = convention_hash();
  const Scenario& s = scenario;
  summary.metadata = {{"schema", std::to_string(s.schema)},
                      {"seed", std::to_string(s.seed)},
                      {"grid", "d=" + std::to_string(s.grid.d) + " N=" + std::to_string(s.grid.N) +
                                   " M=" + std::to_string(s.grid.M) + " L=" + fmt(s.grid.L)},
                      {"potential", s.potential.kind + " A=" + fmt(s.potential.A) + " l=" + fmt(s.potential.l) +
                                        (s.potential.scaled ? " scaled" : "")},
                      {"initial", s.initial.kind + (s.initial.symmetrize ? " symmetrized" : "")},
                      {"run", "T=" + fmt(s.run.T) + " dt=" + fmt(s.run.dt) + " stride=" + std::to_string(s.run.stride)},
                      {"dt_refine", std::to_string(options.dt_refine)}};
  if (options.command == "simulate") ctx.coarse();
  for (const CheckRequest& req : requests) summary.verdicts.push_back(ctx.dispatch(req));
  if (ctx.coarse_ && !ctx.coarse_->warnings.empty()) {
    std::string w;
    for (const std::string& x : ctx.coarse_->warnings) w += (w.empty() ? "" : "; ") + x;
    summary.metadata["warnings"] = w;
  }
  if (!options.out.empty()) write_outputs(ctx, summary);
  return summary;
}

}  // namespace bosedyn::harness
