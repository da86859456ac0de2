// Release gate: every externally promised number, one line of verdict each.
// Tolerances are pinned here on purpose; loosening one is a release decision,
// not a refactor.  Run as: acceptance <path-to-dyadic-binary>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dyadic/experiments.hpp"
#include "dyadic/integrator.hpp"
#include "dyadic/selfsimilar.hpp"
#include "dyadic/series.hpp"
#include "dyadic/shell.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void verdict(int id, bool ok, const std::string& what) {
  std::printf("[%2d] %s %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, ...) {
  va_list args;
  va_start(args, pattern);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// Runs the CLI in `dir` and returns exit code plus parsed stdout JSON.
std::pair<int, json> run_cli(const std::string& binary, const std::string& args,
                             const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path out = dir / "_stdout.json";
  const std::string cmd = "cd '" + dir.string() + "' && '" + binary + "' " + args + " > '" +
                          out.string() + "' 2> /dev/null";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  if (code == 0) j = json::parse(ss.str(), nullptr, false);
  return {code, j};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <dyadic-binary>\n", argv[0]);
    return 99;
  }
  const std::string binary = fs::absolute(argv[1]).string();
  const fs::path scratch = fs::temp_directory_path() / "dyadic_acceptance";
  fs::remove_all(scratch);

  const auto table = dyadic::build_series(400);
  const double beta = table.beta;
  const double R = dyadic::find_R(table, 1e-12).R;

  // 1. critical coefficient through the series route of the CLI
  {
    const auto t0 = Clock::now();
    const auto [code, j] = run_cli(binary, "gamma --method series --tol 1e-9", scratch / "c1");
    const double secs = elapsed(t0);
    const double got = code == 0 ? j.value("gamma_series", 0.0) : 0.0;
    const double err = std::abs(got - 0.917576296);
    verdict(1, code == 0 && err <= 1e-8 && secs < 1.0,
            fmt("gamma --method series: %.10f (|err| %.2e <= 1e-8, %.2f s < 1 s)", got, err,
                secs));
  }

  // 2. convergence radius through the CLI
  {
    const auto t0 = Clock::now();
    const auto [code, j] = run_cli(binary, "radius --tol 1e-10", scratch / "c2");
    const double secs = elapsed(t0);
    const double got = code == 0 ? j.value("R", 0.0) : 0.0;
    const double err = std::abs(got - 0.885765931);
    verdict(2, code == 0 && err <= 1e-8 && got > 0.8 && got < 1.0 && secs < 1.0,
            fmt("radius: %.10f in (4/5, 1) (|err| %.2e <= 1e-8, %.2f s < 1 s)", got, err,
                secs));
  }

  // 3. the two independent routes to the same coefficient agree
  {
    const auto t0 = Clock::now();
    const double series = dyadic::gamma_by_series(table);
    const double shooting = dyadic::gamma_by_shooting(1e-10);
    const double secs = elapsed(t0);
    const double gap = std::abs(series - shooting);
    verdict(3, gap <= 2e-9 && secs < 5.0,
            fmt("shooting vs series: |gap| %.2e <= 2e-9 (%.2f s < 5 s)", gap, secs));
  }

  // 4. leading series coefficient
  {
    const double d0 = table.d_at(0);
    const double err = std::abs(d0 - 0.8155665);
    verdict(4, err <= 5e-8, fmt("d_0 = %.9f (|err| %.2e <= 5e-8)", d0, err));
  }

  // 5. winding-count dominance on both circles plus four real samples
  {
    const auto t0 = Clock::now();
    const auto rep = dyadic::rouche_check(table, 3600);
    const double secs = elapsed(t0);
    const bool bounds = rep.max_b_r1 <= 0.062 && rep.max_b_r45 <= 0.031;
    const bool samples = std::abs(rep.ga_m1 - 3.170) <= 1e-3 &&
                         std::abs(rep.ga_p1 - (-0.092)) <= 1e-3 &&
                         std::abs(rep.ga_m45 - 2.650) <= 1e-3 &&
                         std::abs(rep.ga_p45 - 0.040) <= 1e-3;
    verdict(5, rep.pass && bounds && samples && secs < 5.0,
            fmt("dominance %.4f <= 0.062, %.4f <= 0.031; samples within 1e-3 (%.2f s < 5 s)",
                rep.max_b_r1, rep.max_b_r45, secs));
  }

  // 6. alpha envelope |1 - alpha_{k,i}| <= C beta^{2k} for k <= 60, both formulas
  {
    const auto rep = dyadic::alpha_bound_check(table, 60);
    const double b2 = beta * beta;
    const double c_expected =
        std::max(std::abs(1.0 - dyadic::alpha(0, 0)), (4.0 / 3.0) * (b2 - b2 * b2));
    const double c_gap = std::abs(rep.c - c_expected) / c_expected;
    verdict(6,
            rep.pass && rep.worst_margin >= 0.0 && rep.max_form_gap <= 1e-14 && c_gap < 1e-14,
            fmt("alpha bound to k=60: margin %.2e >= 0, formula gap %.2e <= 1e-14, C %.6f",
                rep.worst_margin, rep.max_form_gap, rep.c));
  }

  // 7. quadratic functional identity of h plus its anchor value
  {
    const double b2 = beta * beta;
    double max_rel = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double x = 0.999 * R * i / 100.0;
      const double lhs = 4.0 * std::pow(dyadic::eval_h(table, x), 2);
      const double hb2 = dyadic::eval_h(table, b2 * x);
      const double rhs = -2.0 * hb2 + dyadic::eval_h(table, b2 * b2 * x) * hb2;
      max_rel = std::max(max_rel, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
    }
    const double anchor = std::abs(dyadic::eval_h(table, std::pow(beta, 4) * R) - 2.0);
    verdict(7, max_rel < 1e-9 && anchor <= 1e-8,
            fmt("h identity residual %.2e < 1e-9 on 100 points; |h(b^4 R) - 2| %.2e <= 1e-8",
                max_rel, anchor));
  }

  // 8. energy conservation on sign-mixed data under plain truncation
  {
    dyadic::ShellState s;
    s.n_modes = 28;
    s.t = 0.0;
    s.x.resize(28);
    std::mt19937 gen(12345);  // raw integer draws keep the data platform-exact
    for (int n = 1; n <= 28; ++n) {
      const double u = 0.5 + (gen() % 1000) / 2000.0;
      const double sign = (gen() % 2) ? 1.0 : -1.0;
      s.x[n - 1] = sign * u * 0.05 * std::ldexp(1.0, -(n + 1) / 2);
    }
    dyadic::IntegratorConfig cfg;
    cfg.rtol = 1e-12;
    cfg.atol = 1e-15;
    cfg.t_end = 10.0;
    cfg.record_every = 1.0;
    const auto tr = dyadic::integrate(s, cfg);
    const double drift = std::abs(tr.energies.back().total - tr.energies.front().total) /
                         tr.energies.front().total;
    verdict(8, tr.status == dyadic::IntegrationStatus::Completed && drift < 1e-10,
            fmt("mixed-sign N=28 to t=10: drift %.2e < 1e-10 (%ld steps)", drift,
                tr.step_stats.accepted));
  }

  // 9. the integrated profile reproduces itself mode by mode
  {
    const auto t0 = Clock::now();
    const auto prof = dyadic::build_profile(0, -1.0, 29, table);
    dyadic::ShellState s;
    s.n_modes = 28;
    s.t = 1.0;
    s.x = prof.a.head(28) / 2.0;
    dyadic::IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-14;
    cfg.t_end = 50.0;
    cfg.record_every = 0.5;
    cfg.boundary = dyadic::profile_drive(prof.a[28], -1.0);
    const auto tr = dyadic::integrate(s, cfg);
    const double secs = elapsed(t0);

    double worst = 0.0;
    for (int n = 1; n <= 22; ++n) {
      const double exact = prof.a[n - 1] / (tr.samples.back().t + 1.0);
      worst = std::max(worst, std::abs(tr.samples.back().x[n - 1] - exact) / std::abs(exact));
    }
    bool monotone = true;
    double prev = 0.0;
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
      const double t2e = tr.samples[i].t * tr.samples[i].t * tr.energies[i].total;
      if (t2e < prev * (1.0 - 1e-12)) monotone = false;
      prev = t2e;
    }
    double s28 = 0.0;
    for (int n = 0; n < 28; ++n) s28 += prof.a[n] * prof.a[n];
    const double closed = std::pow(50.0 / 51.0, 2) * s28;
    const bool limit_ok = prev < s28 && std::abs(prev - closed) / closed < 1e-3;
    verdict(9,
            tr.status == dyadic::IntegrationStatus::Completed && worst <= 1e-6 && monotone &&
                limit_ok && secs < 30.0,
            fmt("profile rerun to t=50: worst mode rel %.2e <= 1e-6, t^2 E monotone to %.6f "
                "(%.1f s < 30 s)",
                worst, prev, secs));
  }

  // 10. geometric tail of the profile coefficients, plain and shifted
  {
    const auto p0 = dyadic::build_profile(0, -1.0, 44, table);
    const auto p2 = dyadic::build_profile(2, -1.0, 44, table);
    const double tail0 = p0.a[39] * std::pow(beta, -40.0) * R;
    const double tail2 = p2.a[39] * std::pow(beta, -40.0) * R / std::pow(beta, 4.0);
    const bool ok0 = tail0 >= 0.999 && tail0 <= 1.001;
    const bool ok2 = tail2 >= 0.999 && tail2 <= 1.001;
    verdict(10, ok0 && ok2,
            fmt("a_40 tail ratios: n0=0 %.6f, n0=2 %.6f, both in [0.999, 1.001]", tail0,
                tail2));
  }

  // 11. every component of the negative branch rides the closed form into underflow
  {
    const auto rep = dyadic::blowup_demo(0, 1e-2, 3);
    const double growth = rep.scalars.at("growth_min");
    const double rel = rep.scalars.at("closed_form_rel_max");
    const bool underflow = rep.scalars.at("underflow") == 1.0;
    verdict(11, rep.pass && growth >= 1e6 && rel <= 1e-4 && underflow,
            fmt("blow-up: min growth %.2e >= 1e6, closed-form rel %.2e <= 1e-4, underflow=%d",
                growth, rel, underflow ? 1 : 0));
  }

  // 12. one datum, two closures: growing analytic branch vs conserving truncation
  {
    const auto rep = dyadic::coalescence_demo(0, 1.0, 6);
    const double growth = rep.scalars.at("energy_growth");
    const double drift = rep.scalars.at("galerkin_drift");
    verdict(12, rep.pass && growth >= 4.0 && drift < 1e-8,
            fmt("coalescence: energy x%.3f >= 4 at the halving time, truncated drift %.2e < "
                "1e-8",
                growth, drift));
  }

  // 13. dissipation budget on integrated traces, six parameter points
  {
    bool all = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int M : {1, 4, 8})
      for (double eps : {1.0, 0.5}) {
        const auto rep = dyadic::dissipation_experiment(1.0, 28, M, eps);
        all = all && rep.pass;
        worst_margin = std::min(worst_margin, rep.scalars.at("margin"));
      }
    verdict(13, all,
            fmt("dissipation budget L=1 N=28, M in {1,4,8} x eps in {1,0.5}: worst margin "
                "%.4f >= 0",
                worst_margin));
  }

  // 14. perturbing the shooting parameter flips lambda' into alternating growth
  {
    const double gamma = dyadic::gamma_by_series(table);
    const double K = 0.5 - 1.0 / dyadic::eval_h(table, std::pow(beta, 8) * R);
    bool ok = K > 0.0;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (const double sign : {1.0, -1.0}) {
      auto orbit = dyadic::tilde_sequence(gamma + sign * 1e-4, 26);
      dyadic::lambda_diagnostics(orbit, table);
      const auto& lp = orbit.lambda_prime;
      if (lp.size() < 22) {
        ok = false;
        break;
      }
      for (int n = 3; n < 20; ++n) ok = ok && lp[n - 1] * lp[n] < 0.0;  // shells n, n+1
      for (int n = 3; n <= 20; ++n) {
        const double ratio = std::abs(lp[n + 1]) / std::abs(lp[n - 1]);
        min_ratio = std::min(min_ratio, ratio);
        ok = ok && ratio >= 1.0 + K;
      }
    }
    verdict(14, ok,
            fmt("lambda' at gamma +/- 1e-4: alternating, two-shell ratio %.4f >= 1 + K = "
                "%.4f",
                min_ratio, 1.0 + K));
  }

  std::printf("%s: %d of 14 criteria passed\n", g_failures == 0 ? "SUCCESS" : "FAILURE",
              14 - g_failures);
  return g_failures;
}
