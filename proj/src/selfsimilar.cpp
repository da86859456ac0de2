#include "dyadic/selfsimilar.hpp"

#include "dyadic/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyadic {

namespace {

const double kBeta = 1.0 / std::cbrt(2.0);
const double kTwoBeta = 2.0 * kBeta;  // 2^{2/3}

// The critical orbit has ~a_n / (2 beta)^n -> 1/R ~ 1.13; a ratio an order of
// magnitude above that means the orbit already left the critical regime.
constexpr double kEnvelopeMargin = 12.0;

struct TildeRun {
  std::vector<double> v;  // ~a_0 .. ~a_last
  enum class Outcome { Clean, Crossed, Margin } outcome = Outcome::Clean;
  int flagged = -1;  // crossing index, or the argmax ratio for Margin
};

TildeRun run_tilde(double a1, int count, double threshold) {
  if (!(a1 > 0.0)) throw std::invalid_argument("tilde sequence: a1 must be positive");
  if (count < 3) throw std::invalid_argument("tilde sequence: count >= 3 required");
  TildeRun run;
  run.v.reserve(count + 1);
  run.v.push_back(0.0);
  run.v.push_back(a1);
  auto crossed = [&](int n) {
    const double x = run.v[n];
    return !std::isfinite(x) || x > threshold * std::pow(kTwoBeta, n);
  };
  if (crossed(1)) {
    run.outcome = TildeRun::Outcome::Crossed;
    run.flagged = 1;
    return run;
  }
  for (int n = 1; n < count; ++n) {
    run.v.push_back(2.0 + 4.0 * run.v[n - 1] * run.v[n - 1] / run.v[n]);
    if (crossed(n + 1)) {
      run.outcome = TildeRun::Outcome::Crossed;
      run.flagged = n + 1;
      return run;
    }
  }
  // no crossing: see whether the orbit still looks critical
  double worst = 0.0;
  for (int n = 5; n <= count; ++n) {
    const double r = run.v[n] / std::pow(kTwoBeta, n);
    if (r > worst) {
      worst = r;
      run.flagged = n;
    }
  }
  if (worst > kEnvelopeMargin) run.outcome = TildeRun::Outcome::Margin;
  return run;
}

Classification parity_class(int n) {
  return n % 2 == 0 ? Classification::DivergesEvenUp : Classification::DivergesOddUp;
}

}  // namespace

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Critical: return "Critical";
    case Classification::DivergesOddUp: return "DivergesOddUp";
    case Classification::DivergesEvenUp: return "DivergesEvenUp";
  }
  return "?";
}

TildeTrace tilde_sequence(double a1, int count) {
  const TildeRun run = run_tilde(a1, count, kDivergenceThreshold);
  TildeTrace trace;
  trace.a_tilde = Eigen::Map<const Eigen::VectorXd>(run.v.data(), run.v.size());
  trace.classification = run.outcome == TildeRun::Outcome::Clean
                             ? Classification::Critical
                             : parity_class(run.flagged);
  return trace;
}

Classification classify(double a1, int count, double threshold) {
  if (!(threshold >= 1e6))
    throw std::invalid_argument("classify: threshold >= 1e6 required");
  const TildeRun run = run_tilde(a1, count, threshold);
  switch (run.outcome) {
    case TildeRun::Outcome::Clean:
      return Classification::Critical;
    case TildeRun::Outcome::Crossed:
      return parity_class(run.flagged);
    case TildeRun::Outcome::Margin:
      break;
  }
  throw InconclusiveClassification(
      "classify: orbit left the critical envelope near n=" + std::to_string(run.flagged) +
      " but no term reached the threshold within count=" + std::to_string(count) +
      "; increase count");
}

double gamma_by_shooting(double tol) {
  if (!(tol >= 1e-12))
    throw std::invalid_argument("gamma_by_shooting: tol >= 1e-12 required");
  const int count = 120;
  auto side = [&](double a1) { return classify(a1, count, kDivergenceThreshold); };

  double lo = 0.0, hi = 0.0;
  Classification cls_lo{};
  bool found = false;
  Classification prev{};
  double prev_a = 0.0;
  for (int j = 1; j <= 16 && !found; ++j) {
    const double a1 = 0.25 * j;
    const Classification c = side(a1);
    if (j > 1 && c != prev) {
      lo = prev_a;
      hi = a1;
      cls_lo = prev;
      found = true;
    }
    prev = c;
    prev_a = a1;
  }
  if (!found)
    throw BracketFailure("gamma_by_shooting: coarse scan over (0, 4] saw a single class");

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (side(mid) == cls_lo ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double gamma_by_series(const SeriesTable& table) {
  const double r = find_R(table, 1e-12).R;
  return eval_h(table, table.beta * table.beta * r);
}

SelfSimilarProfile build_profile(int n0, double t0, int n_modes, const SeriesTable& table) {
  if (n0 < 0) throw std::invalid_argument("build_profile: n0 >= 0 required");
  if (n_modes <= n0 + 2)
    throw std::invalid_argument("build_profile: need N > n0 + 2");
  const double r = find_R(table, 1e-12).R;
  const double b = table.beta;
  SelfSimilarProfile p;
  p.n0 = n0;
  p.t0 = t0;
  p.gamma = eval_h(table, b * b * r);
  p.c_n0 = std::pow(b, 2 * n0) / r;
  p.a = Eigen::VectorXd::Zero(n_modes);
  for (int n = n0 + 1; n <= n_modes; ++n) {
    const double x = std::pow(b, 2 * (n - n0)) * r;
    p.a[n - 1] = std::ldexp(eval_h(table, x), -n);  // 2^{-n} h(beta^{2(n-n0)} R)
  }
  return p;
}

LambdaReport lambda_diagnostics(TildeTrace& trace, const SeriesTable& table) {
  const int m = static_cast<int>(trace.a_tilde.size());
  if (m < 3)
    throw std::invalid_argument("lambda_diagnostics: trace needs at least 3 terms");
  const double r = find_R(table, 1e-12).R;
  const double b = table.beta;
  const double y_cap = eval_h(table, 1e-14);  // top of the invertible window

  int n_used = 0;
  std::vector<double> lam;
  lam.reserve(m);
  while (n_used < m) {
    const double y = trace.a_tilde[n_used];
    if (!std::isfinite(y) || y < 0.0 || y > y_cap) break;
    lam.push_back(h_inverse(table, y));
    ++n_used;
  }
  if (n_used < 3)
    throw std::domain_error("lambda_diagnostics: fewer than 3 terms are invertible");

  trace.lambda = Eigen::Map<const Eigen::VectorXd>(lam.data(), n_used);
  trace.lambda_prime = Eigen::VectorXd::Zero(n_used);
  const double log_b2 = 2.0 * std::log(b);
  for (int n = 1; n < n_used; ++n)
    trace.lambda_prime[n] = std::log(lam[n]) - std::log(lam[n - 1]) - log_b2;

  LambdaReport rep;
  rep.n_used = n_used;
  rep.k_lower = 0.5 - 1.0 / eval_h(table, std::pow(b, 8) * r);
  rep.lambda_prime_max = 0.0;
  for (int n = 1; n < n_used; ++n)
    rep.lambda_prime_max = std::max(rep.lambda_prime_max, std::abs(trace.lambda_prime[n]));

  rep.alternating = n_used > 3;
  for (int n = 2; n + 1 < n_used; ++n)
    rep.alternating =
        rep.alternating && trace.lambda_prime[n] * trace.lambda_prime[n + 1] < 0.0;

  rep.min_two_step_ratio = std::numeric_limits<double>::infinity();
  for (int n = 3; n + 2 < n_used; ++n) {
    const double denom = std::abs(trace.lambda_prime[n]);
    if (denom > 0.0)
      rep.min_two_step_ratio =
          std::min(rep.min_two_step_ratio, std::abs(trace.lambda_prime[n + 2]) / denom);
  }

  if (trace.classification == Classification::Critical) {
    // Any deviation of a1 from the exact critical value doubles per shell, so
    // even a machine-precision start drifts above 1e-6 near n = 42.  Judge
    // smallness on a window where double precision can meet it.
    double windowed = 0.0;
    for (int n = 3; n < std::min(n_used, 31); ++n)
      windowed = std::max(windowed, std::abs(trace.lambda_prime[n]));
    rep.pass = windowed < 1e-6;
  } else {
    rep.pass = rep.alternating && rep.min_two_step_ratio >= 1.0 + rep.k_lower;
  }
  return rep;
}

}  // namespace dyadic
