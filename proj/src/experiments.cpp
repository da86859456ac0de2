#include "dyadic/experiments.hpp"

#include "dyadic/io.hpp"
#include "dyadic/series.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

namespace dyadic {

namespace {

namespace fs = std::filesystem;

// sum_{k>=M} 2^{-k/4}
double geometric_tail(int M) {
  const double r = std::pow(2.0, -0.25);
  return std::pow(2.0, -0.25 * M) / (1.0 - r);
}

std::string emit_trace(const std::string& out_dir, const std::string& name, const Trace& tr) {
  fs::path p = fs::path(out_dir) / name;
  write_text_atomic(p, trace_csv(tr));
  return p.string();
}

void require_nonnegative(const ShellState& s, const char* who) {
  if ((s.x.array() < 0.0).any())
    throw std::invalid_argument(std::string(who) + ": initial data must be nonnegative");
}

}  // namespace

nlohmann::ordered_json report_json(const ExperimentReport& rep) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = rep.name;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : rep.params) j["params"][key] = value;
  j["scalars"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : rep.scalars) j["scalars"][key] = value;
  j["pass"] = rep.pass;
  j["artifacts"] = rep.artifacts;
  return j;
}

BoundaryClosure absorbing_closure() {
  const double beta = 1.0 / std::cbrt(2.0);
  return [beta](double, const Eigen::VectorXd& x) { return beta * x[x.size() - 1]; };
}

BoundaryClosure profile_drive(double a_top, double t0) {
  return [a_top, t0](double t, const Eigen::VectorXd&) { return a_top / (t - t0); };
}

DissipationBudget build_budget(double L, int n_max) {
  if (!(L > 0.0)) throw std::invalid_argument("build_budget: L must be positive");
  if (n_max < 3) throw std::invalid_argument("build_budget: n_max must be at least 3");
  DissipationBudget b;
  b.L = L;
  b.s.resize(n_max);
  b.a_budget.resize(n_max);
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double s_n = std::pow(2.0, -0.25 * n);
    b.s[n - 1] = s_n;
    const double m_n_sq = L * L * n;
    const double m_np2 = L * std::sqrt(static_cast<double>(n + 2));
    const double need =
        2.0 * m_n_sq * m_np2 * (1.0 + 1.0 / (std::ldexp(1.0, n) * s_n * m_np2));
    worst = std::max(worst, need / std::pow(2.0, 0.25 * n));
  }
  // Tiny bump keeps every margin strictly positive after rounding.
  b.C = std::sqrt(worst) * (1.0 + 1e-12);
  b.a_budget = b.C * b.s;
  return b;
}

ExperimentReport dissipation_experiment(double L, int n_modes, int M, double eps,
                                        const std::string& out_dir) {
  if (!(L > 0.0)) throw std::invalid_argument("dissipation: L must be positive");
  if (M < 1 || M > n_modes) throw std::invalid_argument("dissipation: need 1 <= M <= n_modes");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("dissipation: need eps in (0, 1]");

  const DissipationBudget budget = build_budget(L, std::max(n_modes, 40));
  const double t_star = geometric_tail(M) / (eps * eps);
  const double bound = (M - 1) * L * L + eps * budget.C * geometric_tail(M);

  ShellState s0;
  s0.t = 0.0;
  s0.x = Eigen::VectorXd::Constant(n_modes, L);
  s0.n_modes = n_modes;
  IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-14;
  cfg.t_end = t_star;
  cfg.record_every = t_star / 64.0;
  cfg.boundary = absorbing_closure();
  Trace tr = integrate_positive(s0, cfg);

  ExperimentReport rep;
  rep.name = "dissipation";
  rep.params = {{"L", L},
                {"n_modes", static_cast<double>(n_modes)},
                {"M", static_cast<double>(M)},
                {"eps", eps}};
  const double e_final = tr.energies.back().total;
  rep.scalars = {{"t_star", t_star},
                 {"c_budget", budget.C},
                 {"energy_initial", tr.energies.front().total},
                 {"energy_final", e_final},
                 {"bound", bound},
                 {"margin", bound - e_final}};
  rep.pass = tr.status == IntegrationStatus::Completed && e_final <= bound;
  if (!out_dir.empty()) {
    const std::string name =
        "dissipation_M" + std::to_string(M) + "_e" +
        std::to_string(static_cast<int>(std::lround(eps * 100.0))) + ".csv";
    rep.artifacts.push_back(emit_trace(out_dir, name, tr));
  }
  return rep;
}

ExperimentReport decay_upper_experiment(const ShellState& initial, double t_max,
                                        const BoundaryClosure& boundary,
                                        const std::string& out_dir) {
  validate(initial);
  require_nonnegative(initial, "decay_upper");
  const double t_low = std::max(1.0, initial.t);
  if (!(t_max >= 10.0 * t_low))
    throw std::invalid_argument("decay_upper: t_max must cover a decade past t = 1");

  IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-14;
  cfg.t_end = t_max;
  cfg.record_every = 0.02;
  cfg.boundary = boundary ? boundary : absorbing_closure();
  Trace tr = integrate_positive(initial, cfg);

  double sup_all = 0.0, sup_early = 0.0;
  for (std::size_t j = 0; j < tr.samples.size(); ++j) {
    const double t = tr.samples[j].t;
    if (t < t_low) continue;
    const double v = t * t * tr.energies[j].total;
    sup_all = std::max(sup_all, v);
    if (t <= t_max / 10.0) sup_early = std::max(sup_early, v);
  }

  ExperimentReport rep;
  rep.name = "decay_upper";
  rep.params = {{"n_modes", static_cast<double>(initial.n_modes)}, {"t_max", t_max}};
  rep.scalars = {{"sup_t2_energy", sup_all},
                 {"sup_before_last_decade", sup_early},
                 {"last_decade_growth", sup_early > 0.0 ? sup_all / sup_early : 1.0}};
  rep.pass = tr.status == IntegrationStatus::Completed && sup_all <= 1.05 * sup_early;
  if (sup_all == 0.0 && sup_early == 0.0)
    rep.pass = tr.status == IntegrationStatus::Completed;
  if (!out_dir.empty()) rep.artifacts.push_back(emit_trace(out_dir, "decay_upper.csv", tr));
  return rep;
}

ExperimentReport decay_lower_experiment(const ShellState& initial, int n, double t_max,
                                        const BoundaryClosure& boundary,
                                        const std::string& out_dir, double record_every) {
  validate(initial);
  require_nonnegative(initial, "decay_lower");
  if (initial.t != 1.0)
    throw std::invalid_argument("decay_lower: the run must start at t = 1");
  if (n < 1 || n > initial.n_modes - 6)
    throw std::invalid_argument("decay_lower: mode outside the resolved window");
  if (!(initial.x[n - 1] > 0.0))
    throw std::invalid_argument("decay_lower: X_n(1) must be positive");
  if (!(t_max >= 100.0)) throw std::invalid_argument("decay_lower: t_max must be >= 100");

  IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-14;
  cfg.t_end = t_max;
  cfg.record_every = record_every;
  cfg.max_step = record_every;  // uniform trapezoid grid at the requested spacing
  cfg.boundary = boundary ? boundary : absorbing_closure();
  Trace tr = integrate_positive(initial, cfg);

  const double kn = wavenumber<double>(n);
  const double kn_inv = 1.0 / kn;
  double acc = 0.0;           // I(t) = int_1^t X_{n+1}
  double min_gap = std::numeric_limits<double>::infinity();
  double txn_max = 0.0;
  // Least-squares slope of I against log t over the last decade.
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 1; j < tr.samples.size(); ++j) {
    const auto& cur = tr.samples[j];
    const auto& prev = tr.samples[j - 1];
    acc += 0.5 * (cur.t - prev.t) * (cur.x[n] + prev.x[n]);
    if (cur.t >= 10.0) min_gap = std::min(min_gap, acc - kn_inv * std::log(cur.t));
    if (cur.t >= t_max / 10.0) {
      const double lx = std::log(cur.t);
      sw += 1.0;
      sx += lx;
      sy += acc;
      sxx += lx * lx;
      sxy += lx * acc;
      txn_max = std::max(txn_max, cur.t * cur.x[n]);
    }
  }
  const double denom = sw * sxx - sx * sx;
  const double slope = denom > 0.0 ? (sw * sxy - sx * sy) / denom : 0.0;

  ExperimentReport rep;
  rep.name = "decay_lower";
  rep.params = {{"n", static_cast<double>(n)},
                {"n_modes", static_cast<double>(initial.n_modes)},
                {"t_max", t_max}};
  rep.scalars = {{"lower_bound", min_gap},
                 {"slope_last_decade", slope},
                 {"k_n_inv", kn_inv},
                 {"t_x_next_max", txn_max},
                 {"i_final", acc}};
  rep.pass = tr.status == IntegrationStatus::Completed && slope >= 0.999 * kn_inv;
  if (!out_dir.empty()) rep.artifacts.push_back(emit_trace(out_dir, "decay_lower.csv", tr));
  return rep;
}

ExperimentReport blowup_demo(int n0, double t0, int n_modes, const std::string& out_dir) {
  if (!(t0 > 0.0)) throw std::invalid_argument("blowup: t0 must be positive");
  if (n0 < 0) throw std::invalid_argument("blowup: n0 must be nonnegative");
  if (n_modes < n0 + 3) throw std::invalid_argument("blowup: need at least 3 modes above n0");

  const SeriesTable table = build_series(400);
  const SelfSimilarProfile prof = build_profile(n0, 0.0, n_modes + 1, table);
  ShellState s0;
  s0.t = 0.0;
  s0.x = -prof.a.head(n_modes) / t0;  // Y_n(0) = a_n / (0 - t0)
  s0.n_modes = n_modes;

  // The negative branch is dynamically unstable: deviations from the closed
  // form are amplified at a measured rate of about 0.7*k_N*a_{N+1} per unit
  // of log(t0/(t0-t)), so noise of order rtol reaches O(1) after
  // log(1/rtol)/rate e-folds of growth. At rtol 2e-15 only a cascade of
  // length n_modes - n0 = 3 (rate ~2.2) stays coherent through the 1e6
  // growth the demo wants to certify; longer cascades lose the closed form
  // after a few hundred-fold growth. Tolerances here are therefore pinned
  // at the roundoff floor and demos should keep the cascade short.
  IntegratorConfig cfg;
  cfg.rtol = 2e-15;
  cfg.atol = 1e-18;
  cfg.min_step = 1e-13;
  cfg.t_end = t0;
  cfg.record_every = t0 / 2000.0;
  cfg.boundary = profile_drive(prof.a[n_modes], t0);
  Trace tr = integrate(s0, cfg);

  const auto& last = tr.samples.back();
  // Growth is certified per component as the peak magnitude anywhere on the
  // trace over its initial magnitude, worst component reported.
  Eigen::VectorXd peak = s0.x.cwiseAbs();
  double rel_max = 0.0;
  for (const auto& s : tr.samples) {
    peak = peak.cwiseMax(s.x.cwiseAbs());
    if (s.x.cwiseAbs().maxCoeff() > 1e3) continue;
    for (int n = n0 + 1; n <= n_modes; ++n) {
      const double expect = prof.a[n - 1] / (s.t - t0);
      rel_max = std::max(rel_max, std::abs(s.x[n - 1] - expect) / std::abs(expect));
    }
  }
  double growth_min = std::numeric_limits<double>::infinity();
  for (int n = n0 + 1; n <= n_modes; ++n)
    growth_min = std::min(growth_min, peak[n - 1] / std::abs(s0.x[n - 1]));

  ExperimentReport rep;
  rep.name = "blowup";
  rep.params = {{"n0", static_cast<double>(n0)},
                {"t0", t0},
                {"n_modes", static_cast<double>(n_modes)}};
  rep.scalars = {{"growth_min", growth_min},
                 {"closed_form_rel_max", rel_max},
                 {"t_reached", last.t},
                 {"gap_to_t0", t0 - last.t},
                 {"underflow", tr.status == IntegrationStatus::StepUnderflow ? 1.0 : 0.0}};
  rep.pass = tr.status == IntegrationStatus::StepUnderflow && growth_min >= 1e6 &&
             rel_max <= 1e-4;
  if (!out_dir.empty()) rep.artifacts.push_back(emit_trace(out_dir, "blowup.csv", tr));
  return rep;
}

ExperimentReport coalescence_demo(int n0, double t0, int n_modes, const std::string& out_dir) {
  if (!(t0 > 0.0)) throw std::invalid_argument("coalescence: t0 must be positive");
  if (n0 < 0) throw std::invalid_argument("coalescence: n0 must be nonnegative");
  if (n_modes < n0 + 5) throw std::invalid_argument("coalescence: need at least 5 modes above n0");

  const SeriesTable table = build_series(400);
  const SelfSimilarProfile prof = build_profile(n0, 0.0, n_modes + 1, table);
  ShellState s0;
  s0.t = 0.0;
  s0.x = -prof.a.head(n_modes) / t0;
  s0.n_modes = n_modes;
  const double e0 = s0.x.squaredNorm();
  const double sum_a_sq = prof.a.head(n_modes).squaredNorm();

  IntegratorConfig cfg;
  cfg.rtol = 1e-11;
  cfg.atol = 1e-15;
  cfg.t_end = 0.75 * t0;
  cfg.record_every = t0 / 200.0;

  // The driven branch shares the blow-up instability, so it runs at the
  // tightest tolerance; the truncated branch is bounded and needs less.
  IntegratorConfig driven = cfg;
  driven.rtol = 1e-13;
  driven.atol = 1e-16;
  driven.boundary = profile_drive(prof.a[n_modes], t0);
  Trace tr_driven = integrate(s0, driven);
  Trace tr_galerkin = integrate(s0, cfg);

  // Driven branch gains energy along the closed form a_n/(t-t0).
  double energy_growth = 0.0, driven_rel = 0.0;
  for (std::size_t j = 0; j < tr_driven.samples.size(); ++j) {
    const double t = tr_driven.samples[j].t;
    const double e = tr_driven.energies[j].total;
    energy_growth = std::max(energy_growth, e / e0);
    const double closed = sum_a_sq / ((t - t0) * (t - t0));
    driven_rel = std::max(driven_rel, std::abs(e - closed) / closed);
  }

  // Galerkin branch conserves energy; its gap to the closed form widens.
  double drift = 0.0, div_prev = 0.0;
  bool monotone = true;
  for (std::size_t j = 0; j < tr_galerkin.samples.size(); ++j) {
    const auto& s = tr_galerkin.samples[j];
    drift = std::max(drift, std::abs(tr_galerkin.energies[j].total - e0) / e0);
    double div = 0.0;
    for (int n = n0 + 1; n <= n_modes; ++n)
      div = std::max(div, std::abs(s.x[n - 1] - prof.a[n - 1] / (s.t - t0)));
    if (div_prev > 1e-10 && div < div_prev * 0.999) monotone = false;
    div_prev = div;
  }

  ExperimentReport rep;
  rep.name = "coalescence";
  rep.params = {{"n0", static_cast<double>(n0)},
                {"t0", t0},
                {"n_modes", static_cast<double>(n_modes)}};
  rep.scalars = {{"energy_growth", energy_growth},
                 {"driven_closed_form_rel", driven_rel},
                 {"galerkin_drift", drift},
                 {"divergence_final", div_prev},
                 {"divergence_monotone", monotone ? 1.0 : 0.0}};
  rep.pass = tr_driven.status == IntegrationStatus::Completed &&
             tr_galerkin.status == IntegrationStatus::Completed && energy_growth >= 4.0 &&
             drift < 1e-8 && monotone;
  if (!out_dir.empty()) {
    rep.artifacts.push_back(emit_trace(out_dir, "coalesce_driven.csv", tr_driven));
    rep.artifacts.push_back(emit_trace(out_dir, "coalesce_galerkin.csv", tr_galerkin));
  }
  return rep;
}

}  // namespace dyadic
