#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "dyadic/errors.hpp"
#include "dyadic/experiments.hpp"
#include "dyadic/io.hpp"
#include "dyadic/selfsimilar.hpp"
#include "dyadic/series.hpp"
#include "dyadic/shell.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

using Setters = std::map<std::string, std::function<void(const std::string&)>>;

double to_double(const std::string& raw) {
  std::size_t pos = 0;
  const double v = std::stod(raw, &pos);
  if (pos != raw.size()) throw std::invalid_argument("trailing characters");
  return v;
}

int to_int(const std::string& raw) {
  std::size_t pos = 0;
  const int v = std::stoi(raw, &pos);
  if (pos != raw.size()) throw std::invalid_argument("trailing characters");
  return v;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Flat `key = value` lines; '#' starts a comment; keys match the long flag
// names of the invoked command (without the leading dashes).
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: missing '=' at " + path + ":" +
                                  std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument("config: empty key or value at " + path + ":" +
                                  std::to_string(lineno));
    entries.emplace_back(key, value);
  }
  return entries;
}

void apply_config(const std::vector<std::pair<std::string, std::string>>& entries,
                  const Setters& setters) {
  for (const auto& [key, value] : entries) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw std::invalid_argument("config: unknown key '" + key + "'");
    try {
      it->second(value);
    } catch (const std::exception&) {
      throw std::invalid_argument("config: bad value for '" + key + "': " + value);
    }
  }
}

void require_choice(const std::string& what, const std::string& value,
                    const std::vector<std::string>& allowed) {
  for (const auto& a : allowed)
    if (value == a) return;
  std::string msg = what + " must be one of {";
  for (std::size_t i = 0; i < allowed.size(); ++i)
    msg += (i ? ", " : "") + allowed[i];
  throw std::invalid_argument(msg + "}, got '" + value + "'");
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

void write_json_artifact(const std::string& out_dir, const std::string& name,
                         const ordered_json& j, std::vector<std::string>* artifacts) {
  const fs::path p = fs::path(out_dir) / name;
  dyadic::write_text_atomic(p, j.dump(2) + "\n");
  if (artifacts) artifacts->push_back(p.string());
}

struct PresetState {
  dyadic::ShellState state;
  std::string default_closure;
  double a_top = 0.0;  // profile coefficient a_{N+1}, when a profile exists
  double t0 = 0.0;
};

PresetState make_initial(const std::string& preset, int n0, double t0, int modes,
                         double amplitude, double t_start,
                         const dyadic::SeriesTable& table) {
  require_choice("preset", preset, {"selfsimilar", "flat", "single", "negative-selfsimilar"});
  PresetState ps;
  ps.t0 = t0;
  ps.state.n_modes = modes;
  ps.state.t = t_start;
  if (preset == "selfsimilar" || preset == "negative-selfsimilar") {
    if (preset == "selfsimilar" && !(t_start > t0))
      throw std::invalid_argument("selfsimilar preset needs t-start > t0");
    if (preset == "negative-selfsimilar" && !(t_start < t0))
      throw std::invalid_argument("negative-selfsimilar preset needs t-start < t0");
    const auto prof = dyadic::build_profile(n0, t0, modes + 1, table);
    ps.state.x = prof.a.head(modes) / (t_start - t0);
    ps.a_top = prof.a[modes];
    ps.default_closure = "drive";
  } else if (preset == "flat") {
    ps.state.x = Eigen::VectorXd::Constant(modes, amplitude);
    ps.default_closure = "absorbing";
  } else {
    ps.state.x = Eigen::VectorXd::Zero(modes);
    ps.state.x[0] = 1.0;
    ps.default_closure = "absorbing";
  }
  return ps;
}

dyadic::BoundaryClosure make_closure(const std::string& name, const PresetState& ps) {
  require_choice("closure", name, {"none", "absorbing", "drive"});
  if (name == "none") return {};
  if (name == "absorbing") return dyadic::absorbing_closure();
  if (ps.a_top == 0.0)
    throw std::invalid_argument("drive closure needs a profile preset");
  return dyadic::profile_drive(ps.a_top, ps.t0);
}

int run_gamma(const std::string& method, double tol, int terms, const std::string& out_dir) {
  require_choice("method", method, {"series", "shooting", "both"});
  ordered_json j;
  j["schema_version"] = dyadic::kSchemaVersion;
  j["command"] = "gamma";
  j["method"] = method;
  j["tol"] = tol;
  j["terms"] = terms;
  double series = 0.0, shooting = 0.0;
  if (method != "shooting") {
    series = dyadic::gamma_by_series(dyadic::build_series(terms));
    j["gamma_series"] = series;
  }
  if (method != "series") {
    shooting = dyadic::gamma_by_shooting(tol);
    j["gamma_shooting"] = shooting;
  }
  if (method == "both") j["difference"] = std::abs(series - shooting);
  std::vector<std::string> artifacts;
  write_json_artifact(out_dir, "gamma.json", j, &artifacts);
  j["artifacts"] = artifacts;
  emit(j);
  return 0;
}

int run_radius(double tol, int terms, const std::string& out_dir) {
  const auto rep = dyadic::find_R(dyadic::build_series(terms), tol);
  ordered_json j = dyadic::radius_json(rep);
  std::vector<std::string> artifacts;
  write_json_artifact(out_dir, "radius.json", j, &artifacts);
  j["artifacts"] = artifacts;
  emit(j);
  return 0;
}

int run_series(int terms, const std::string& out_dir) {
  const auto table = dyadic::build_series(terms);
  const fs::path csv = fs::path(out_dir) / "series.csv";
  dyadic::write_text_atomic(csv, dyadic::series_csv(table));
  ordered_json j;
  j["schema_version"] = dyadic::kSchemaVersion;
  j["command"] = "series";
  j["terms"] = table.terms;
  j["d0"] = table.d_at(0);
  j["artifacts"] = {csv.string()};
  emit(j);
  return 0;
}

int run_selfsimilar(int n0, double t0, int modes, int terms, const std::string& out_dir) {
  const auto table = dyadic::build_series(terms);
  const auto prof = dyadic::build_profile(n0, t0, modes, table);
  const fs::path csv = fs::path(out_dir) / "profile.csv";
  dyadic::write_text_atomic(csv, dyadic::profile_csv(prof));
  ordered_json j;
  j["schema_version"] = dyadic::kSchemaVersion;
  j["command"] = "selfsimilar";
  j["n0"] = n0;
  j["t0"] = t0;
  j["n_modes"] = modes;
  j["gamma"] = prof.gamma;
  j["c_n0"] = prof.c_n0;
  j["artifacts"] = {csv.string()};
  emit(j);
  return 0;
}

int run_simulate(const std::string& preset, int n0, double t0, int modes, double amplitude,
                 double t_start, double t_end, double rtol, double atol, double record_every,
                 const std::string& closure, int terms, const std::string& out_dir) {
  const auto table = dyadic::build_series(terms);
  const auto ps = make_initial(preset, n0, t0, modes, amplitude, t_start, table);

  dyadic::IntegratorConfig cfg;
  cfg.rtol = rtol;
  cfg.atol = atol;
  cfg.t_end = t_end;
  cfg.record_every =
      std::isnan(record_every) ? std::abs(t_end - t_start) / 100.0 : record_every;
  cfg.boundary = make_closure(closure.empty() ? ps.default_closure : closure, ps);
  const auto trace = dyadic::integrate(ps.state, cfg);

  const fs::path csv = fs::path(out_dir) / "trace.csv";
  dyadic::write_text_atomic(csv, dyadic::trace_csv(trace));

  ordered_json j;
  j["schema_version"] = dyadic::kSchemaVersion;
  j["command"] = "simulate";
  j["preset"] = preset;
  j["n_modes"] = modes;
  j["status"] = dyadic::to_string(trace.status);
  j["accepted"] = trace.step_stats.accepted;
  j["rejected"] = trace.step_stats.rejected;
  j["t_start"] = t_start;
  j["t_end"] = t_end;
  j["t_reached"] = trace.samples.back().t;
  j["energy_initial"] = trace.energies.front().total;
  j["energy_final"] = trace.energies.back().total;
  j["artifacts"] = {csv.string()};
  emit(j);
  if (trace.status == dyadic::IntegrationStatus::NonFinite) {
    std::cerr << "NonFinite\n";
    return 3;
  }
  return 0;
}

int run_verify(const std::string& suite, int terms, int grid, int kmax,
               const std::string& out_dir) {
  require_choice("suite", suite, {"all", "alpha", "rouche", "h"});
  const auto table = dyadic::build_series(terms);
  ordered_json j;
  j["schema_version"] = dyadic::kSchemaVersion;
  j["command"] = "verify";
  j["suite"] = suite;
  bool pass = true;

  if (suite == "all" || suite == "alpha") {
    const auto rep = dyadic::alpha_bound_check(table, kmax);
    j["alpha"] = {{"pass", rep.pass},
                  {"c", rep.c},
                  {"worst_margin", rep.worst_margin},
                  {"max_form_gap", rep.max_form_gap},
                  {"sign_pattern_ok", rep.sign_pattern_ok}};
    pass = pass && rep.pass;
  }
  if (suite == "all" || suite == "rouche") {
    const auto rep = dyadic::rouche_check(table, grid);
    j["rouche"] = {{"pass", rep.pass},
                   {"grid_points", rep.grid_points},
                   {"max_b_r1", rep.max_b_r1},
                   {"max_b_r45", rep.max_b_r45},
                   {"ga_m1", rep.ga_m1},
                   {"ga_p1", rep.ga_p1},
                   {"ga_m45", rep.ga_m45},
                   {"ga_p45", rep.ga_p45}};
    pass = pass && rep.pass;
  }

  const auto radius = dyadic::find_R(table, 1e-12);
  if (suite == "all" || suite == "h") {
    // 4 h(x)^2 = -2 h(b^2 x) + h(b^4 x) h(b^2 x) on an interior grid, plus the
    // anchor h(b^4 R) = 2.
    const double b2 = table.beta * table.beta;
    double max_rel = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double x = 0.999 * radius.R * i / 100.0;
      const double lhs = 4.0 * std::pow(dyadic::eval_h(table, x), 2);
      const double hb2 = dyadic::eval_h(table, b2 * x);
      const double rhs = -2.0 * hb2 + dyadic::eval_h(table, b2 * b2 * x) * hb2;
      max_rel = std::max(max_rel, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
    }
    const double anchor_gap = std::abs(dyadic::eval_h(table, std::pow(table.beta, 4) * radius.R) - 2.0);
    const bool ok = max_rel < 1e-9 && anchor_gap < 1e-8;
    j["h_identity"] = {{"pass", ok},
                       {"max_rel_residual", max_rel},
                       {"anchor_gap", anchor_gap}};
    pass = pass && ok;
  }

  std::vector<std::string> artifacts;
  if (suite == "all") {
    const double gamma_series = dyadic::gamma_by_series(table);
    const double gamma_shooting = dyadic::gamma_by_shooting(1e-10);
    auto orbit = dyadic::tilde_sequence(gamma_series, 40);
    const auto lam = dyadic::lambda_diagnostics(orbit, table);
    ordered_json diag;
    diag["schema_version"] = dyadic::kSchemaVersion;
    diag["gamma_series"] = gamma_series;
    diag["gamma_shooting"] = gamma_shooting;
    diag["R"] = radius.R;
    diag["classification"] = dyadic::to_string(orbit.classification);
    diag["lambda_prime_max"] = lam.lambda_prime_max;
    write_json_artifact(out_dir, "diagnostics.json", diag, &artifacts);
    j["diagnostics"] = diag;
  }
  j["pass"] = pass;
  j["artifacts"] = artifacts;
  emit(j);
  return pass ? 0 : 1;
}

int run_decay(const std::string& mode, const std::string& preset, int n0, double t0,
              int modes, double amplitude, double t_max, int n, const std::string& closure,
              int terms, const std::string& out_dir) {
  require_choice("mode", mode, {"upper", "lower"});
  if (preset == "negative-selfsimilar")
    throw std::invalid_argument("decay needs nonnegative data; use blowup for the mirror");
  const auto table = dyadic::build_series(terms);
  const auto ps = make_initial(preset, n0, t0, modes, amplitude, 1.0, table);
  const auto boundary = make_closure(closure.empty() ? ps.default_closure : closure, ps);

  dyadic::ExperimentReport rep;
  if (mode == "upper") {
    rep = dyadic::decay_upper_experiment(ps.state, std::isnan(t_max) ? 500.0 : t_max,
                                         boundary, out_dir);
  } else {
    rep = dyadic::decay_lower_experiment(ps.state, n, std::isnan(t_max) ? 200.0 : t_max,
                                         boundary, out_dir);
  }
  ordered_json j = dyadic::report_json(rep);
  write_json_artifact(out_dir, "decay_" + mode + ".json", j, &rep.artifacts);
  j["artifacts"] = rep.artifacts;
  emit(j);
  return rep.pass ? 0 : 1;
}

int run_blowup(int n0, double t0, int modes, const std::string& out_dir) {
  auto rep = dyadic::blowup_demo(n0, t0, modes, out_dir);
  ordered_json j = dyadic::report_json(rep);
  write_json_artifact(out_dir, "blowup.json", j, &rep.artifacts);
  j["artifacts"] = rep.artifacts;
  emit(j);
  return rep.pass ? 0 : 1;
}

int run_coalesce(int n0, double t0, int modes, const std::string& out_dir) {
  auto rep = dyadic::coalescence_demo(n0, t0, modes, out_dir);
  ordered_json j = dyadic::report_json(rep);
  write_json_artifact(out_dir, "coalesce.json", j, &rep.artifacts);
  j["artifacts"] = rep.artifacts;
  emit(j);
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic shell model: constants, profiles, integration, experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--out", out_dir, "artifact directory");

  // gamma
  std::string g_method = "both";
  double g_tol = 1e-9;
  int g_terms = 400;
  auto* gamma = app.add_subcommand("gamma", "compute the critical coefficient");
  gamma->fallthrough();
  gamma->add_option("--method", g_method, "series | shooting | both");
  gamma->add_option("--tol", g_tol, "shooting tolerance");
  gamma->add_option("--terms", g_terms, "series truncation order");

  // radius
  double r_tol = 1e-10;
  int r_terms = 400;
  auto* radius = app.add_subcommand("radius", "locate the convergence radius");
  radius->fallthrough();
  radius->add_option("--tol", r_tol, "bracket width");
  radius->add_option("--terms", r_terms, "series truncation order");

  // series
  int s_terms = 400;
  auto* series = app.add_subcommand("series", "emit the coefficient tables");
  series->fallthrough();
  series->add_option("--terms", s_terms, "series truncation order");

  // selfsimilar
  int ss_n0 = 0, ss_modes = 40, ss_terms = 400;
  double ss_t0 = 0.0;
  auto* selfsim = app.add_subcommand("selfsimilar", "emit the profile coefficients");
  selfsim->fallthrough();
  selfsim->add_option("--n0", ss_n0, "inactive leading modes");
  selfsim->add_option("--t0", ss_t0, "profile time offset");
  selfsim->add_option("--modes", ss_modes, "number of coefficients");
  selfsim->add_option("--terms", ss_terms, "series truncation order");

  // simulate
  std::string si_preset, si_closure;
  int si_n0 = 0, si_modes = 20, si_terms = 400;
  double si_t0 = -1.0, si_l = 1.0, si_tstart = std::nan("");
  double si_tend = 10.0, si_rtol = 1e-10, si_atol = 1e-12, si_record = std::nan("");
  auto* simulate = app.add_subcommand("simulate", "integrate a preset initial state");
  simulate->fallthrough();
  simulate->add_option("--preset", si_preset,
                       "selfsimilar | flat | single | negative-selfsimilar")
      ->required();
  simulate->add_option("--n0", si_n0, "inactive leading modes");
  simulate->add_option("--t0", si_t0, "profile time offset");
  simulate->add_option("--modes", si_modes, "truncation size");
  simulate->add_option("--l", si_l, "flat preset amplitude");
  simulate->add_option("--t-start", si_tstart, "start time (preset default)");
  simulate->add_option("--t-end", si_tend, "end time");
  simulate->add_option("--rtol", si_rtol, "relative tolerance");
  simulate->add_option("--atol", si_atol, "absolute tolerance");
  simulate->add_option("--record-every", si_record, "sample spacing");
  simulate->add_option("--closure", si_closure, "none | absorbing | drive");
  simulate->add_option("--terms", si_terms, "series truncation order");

  // verify
  std::string v_suite = "all";
  int v_terms = 400, v_grid = 3600, v_kmax = 60;
  auto* verify = app.add_subcommand("verify", "run the analytic cross-checks");
  verify->fallthrough();
  verify->add_option("--suite", v_suite, "all | alpha | rouche | h");
  verify->add_option("--terms", v_terms, "series truncation order");
  verify->add_option("--grid", v_grid, "circle grid points");
  verify->add_option("--kmax", v_kmax, "alpha bound depth");

  // decay
  std::string d_mode = "upper", d_preset = "selfsimilar", d_closure;
  int d_n0 = 0, d_modes = 16, d_n = 3, d_terms = 400;
  double d_t0 = -1.0, d_l = 1.0, d_tmax = std::nan("");
  auto* decay = app.add_subcommand("decay", "decay experiments");
  decay->fallthrough();
  decay->add_option("--mode", d_mode, "upper | lower");
  decay->add_option("--preset", d_preset, "selfsimilar | flat | single");
  decay->add_option("--n0", d_n0, "inactive leading modes");
  decay->add_option("--t0", d_t0, "profile time offset");
  decay->add_option("--modes", d_modes, "truncation size");
  decay->add_option("--l", d_l, "flat preset amplitude");
  decay->add_option("--t-max", d_tmax, "horizon (default 500 upper, 200 lower)");
  decay->add_option("--n", d_n, "monitored mode for the lower bound");
  decay->add_option("--closure", d_closure, "none | absorbing | drive");
  decay->add_option("--terms", d_terms, "series truncation order");

  // blowup
  int b_n0 = 0, b_modes = 3;
  double b_t0 = 1e-2;
  auto* blowup = app.add_subcommand("blowup", "finite-time blow-up demo");
  blowup->fallthrough();
  blowup->add_option("--n0", b_n0, "inactive leading modes");
  blowup->add_option("--t0", b_t0, "blow-up instant");
  blowup->add_option("--modes", b_modes, "truncation size");

  // coalesce
  int c_n0 = 0, c_modes = 6;
  double c_t0 = 1.0;
  auto* coalesce = app.add_subcommand("coalesce", "conserved vs growing energy dichotomy");
  coalesce->fallthrough();
  coalesce->add_option("--n0", c_n0, "inactive leading modes");
  coalesce->add_option("--t0", c_t0, "blow-up instant");
  coalesce->add_option("--modes", c_modes, "truncation size");

  try {
    // Locate the command and an optional --config before the real parse so the
    // file's values become defaults that explicit flags then override.
    std::string command;
    for (int i = 1; i < argc; ++i) {
      const std::string tok = argv[i];
      if (tok == "--config" && i + 1 < argc) {
        config_path = argv[i + 1];
        ++i;
        continue;
      }
      if (tok.rfind("--config=", 0) == 0) {
        config_path = tok.substr(9);
        continue;
      }
      if (!tok.empty() && tok[0] != '-' && command.empty()) command = tok;
    }

    if (!config_path.empty() && !command.empty()) {
      Setters setters{{"out", [&](const std::string& v) { out_dir = v; }}};
      auto set_d = [](double& slot) {
        return [&slot](const std::string& v) { slot = to_double(v); };
      };
      auto set_i = [](int& slot) {
        return [&slot](const std::string& v) { slot = to_int(v); };
      };
      auto set_s = [](std::string& slot) {
        return [&slot](const std::string& v) { slot = v; };
      };
      if (command == "gamma") {
        setters["method"] = set_s(g_method);
        setters["tol"] = set_d(g_tol);
        setters["terms"] = set_i(g_terms);
      } else if (command == "radius") {
        setters["tol"] = set_d(r_tol);
        setters["terms"] = set_i(r_terms);
      } else if (command == "series") {
        setters["terms"] = set_i(s_terms);
      } else if (command == "selfsimilar") {
        setters["n0"] = set_i(ss_n0);
        setters["t0"] = set_d(ss_t0);
        setters["modes"] = set_i(ss_modes);
        setters["terms"] = set_i(ss_terms);
      } else if (command == "simulate") {
        setters["preset"] = set_s(si_preset);
        setters["n0"] = set_i(si_n0);
        setters["t0"] = set_d(si_t0);
        setters["modes"] = set_i(si_modes);
        setters["l"] = set_d(si_l);
        setters["t-start"] = set_d(si_tstart);
        setters["t-end"] = set_d(si_tend);
        setters["rtol"] = set_d(si_rtol);
        setters["atol"] = set_d(si_atol);
        setters["record-every"] = set_d(si_record);
        setters["closure"] = set_s(si_closure);
        setters["terms"] = set_i(si_terms);
      } else if (command == "verify") {
        setters["suite"] = set_s(v_suite);
        setters["terms"] = set_i(v_terms);
        setters["grid"] = set_i(v_grid);
        setters["kmax"] = set_i(v_kmax);
      } else if (command == "decay") {
        setters["mode"] = set_s(d_mode);
        setters["preset"] = set_s(d_preset);
        setters["n0"] = set_i(d_n0);
        setters["t0"] = set_d(d_t0);
        setters["modes"] = set_i(d_modes);
        setters["l"] = set_d(d_l);
        setters["t-max"] = set_d(d_tmax);
        setters["n"] = set_i(d_n);
        setters["closure"] = set_s(d_closure);
        setters["terms"] = set_i(d_terms);
      } else if (command == "blowup") {
        setters["n0"] = set_i(b_n0);
        setters["t0"] = set_d(b_t0);
        setters["modes"] = set_i(b_modes);
      } else if (command == "coalesce") {
        setters["n0"] = set_i(c_n0);
        setters["t0"] = set_d(c_t0);
        setters["modes"] = set_i(c_modes);
      }
      apply_config(read_config(config_path), setters);
    }

    app.parse(argc, argv);

    if (const char* env = std::getenv("DYADIC_OUT"); env && *env) out_dir = env;

    if (gamma->parsed()) return run_gamma(g_method, g_tol, g_terms, out_dir);
    if (radius->parsed()) return run_radius(r_tol, r_terms, out_dir);
    if (series->parsed()) return run_series(s_terms, out_dir);
    if (selfsim->parsed())
      return run_selfsimilar(ss_n0, ss_t0, ss_modes, ss_terms, out_dir);
    if (simulate->parsed()) {
      if (std::isnan(si_tstart))
        si_tstart = si_preset == "negative-selfsimilar" ? 0.0 : 1.0;
      return run_simulate(si_preset, si_n0, si_t0, si_modes, si_l, si_tstart, si_tend,
                          si_rtol, si_atol, si_record, si_closure, si_terms, out_dir);
    }
    if (verify->parsed()) return run_verify(v_suite, v_terms, v_grid, v_kmax, out_dir);
    if (decay->parsed())
      return run_decay(d_mode, d_preset, d_n0, d_t0, d_modes, d_l, d_tmax, d_n, d_closure,
                       d_terms, out_dir);
    if (blowup->parsed()) return run_blowup(b_n0, b_t0, b_modes, out_dir);
    if (coalesce->parsed()) return run_coalesce(c_n0, c_t0, c_modes, out_dir);
    std::cerr << "no command\n";
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const dyadic::NumericError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
}
