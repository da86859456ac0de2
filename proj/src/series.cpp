#include "dyadic/series.hpp"

#include "dyadic/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dyadic {

namespace {

const double kBeta = 1.0 / std::cbrt(2.0);  // 2^{-1/3}
const double kLogBeta = -std::numbers::ln2 / 3.0;

// Powers shared by every alpha_{k,i} with the same k, hoisted out of the
// convolution inner loop.
struct AlphaRow {
  int k;
  double den, p2k2, p2k7, p3k6;

  explicit AlphaRow(int kk)
      : k(kk),
        den(1.0 - std::pow(kBeta, 2 * kk + 7) - std::pow(kBeta, 4 * kk + 11)),
        p2k2(1.0 - std::pow(kBeta, 2 * kk + 2)),
        p2k7(std::pow(kBeta, 2 * kk + 7)),
        p3k6(std::pow(kBeta, 3 * kk + 6)) {}

  double at(int i) const {
    if (k == 0)
      return (1.0 + std::pow(kBeta, 4) - 1.0 / kBeta) /
             (1.0 - std::pow(kBeta, 7) - std::pow(kBeta, 11));
    if (i == 0 || i == k) return p2k2 * (1.0 + p2k7) / den;
    return (1.0 - p3k6 * std::cosh((k - 2 * i) * kLogBeta)) / den;
  }
};

// Largest ratio |c_k / c_{k-1}| over the trailing window; used to bound the
// dropped tail geometrically.
template <typename Getter>
double trailing_ratio(int K, Getter c) {
  double rho = 0.0;
  for (int k = std::max(1, K - 19); k <= K; ++k) {
    const double prev = std::abs(c(k - 1));
    if (prev > 1e-300) rho = std::max(rho, std::abs(c(k)) / prev);
  }
  return rho;
}

template <typename Getter>
void require_tail(const char* fn, int K, Getter c, double az) {
  if (az == 0.0) return;
  const double q = trailing_ratio(K, c) * az;
  double tail = std::numeric_limits<double>::infinity();
  if (q < 0.999) tail = std::abs(c(K)) * std::pow(az, K) * q / (1.0 - q);
  if (!(tail <= 1e-14)) {
    std::ostringstream os;
    os << fn << ": truncation tail ~" << tail << " at |z|=" << az
       << " exceeds 1e-14; rebuild with a larger K";
    throw RadiusExceeded(os.str());
  }
}

template <typename Scalar, typename Getter>
Scalar horner(int K, Getter c, Scalar z) {
  Scalar acc(c(K));
  for (int k = K - 1; k >= 0; --k) acc = acc * z + Scalar(c(k));
  return acc;
}

template <typename Scalar>
Scalar eval_g_impl(const SeriesTable& t, Scalar z) {
  auto c = [&](int k) { return t.d_at(k); };
  Scalar s = horner(t.terms, c, z);
  require_tail("eval_g", t.terms, c, std::abs(z));
  return s;
}

template <typename Scalar>
Scalar eval_g_hat_impl(const SeriesTable& t, Scalar z) {
  auto c = [&](int k) { return t.d_prime_at(k); };
  Scalar s = horner(t.terms, c, z);
  require_tail("eval_g_hat", t.terms, c, std::abs(z));
  return s;
}

double big_m() { return 0.5 * alpha(2, 1); }
double big_a() { return 1.0 - alpha(0, 0) / (2.0 * big_m()); }

double z1_radius(double d0) {
  const double a00 = alpha(0, 0), a21 = alpha(2, 1);
  return (1.0 - std::sqrt(a00 / a21)) / ((a21 - a00) * d0);
}

template <typename Scalar>
Scalar eval_G_impl(const SeriesTable& t, Scalar z) {
  const double d0 = t.d_at(0);
  if (std::abs(z) >= z1_radius(d0)) {
    std::ostringstream os;
    os << "eval_G: |z|=" << std::abs(z) << " is outside the disk of radius z1="
       << z1_radius(d0);
    throw RadiusExceeded(os.str());
  }
  // G = (1 - sqrt(1 - 4 M d0 z + 4 A M^2 d0^2 z^2)) / (2 M z), written without
  // the cancellation at small z: multiply through by the sqrt conjugate.
  const double m = big_m(), a = big_a();
  const Scalar w = (4.0 * m * d0) * z - (4.0 * a * m * m * d0 * d0) * (z * z);
  using std::sqrt;
  return ((2.0 * d0) - (2.0 * a * m * d0 * d0) * z) / (1.0 + sqrt(Scalar(1.0) - w));
}

}  // namespace

double alpha(int k, int i) {
  if (k < 0 || i < 0 || i > k) throw std::out_of_range("alpha: need 0 <= i <= k");
  return AlphaRow(k).at(i);
}

double alpha_rational(int k, int i) {
  if (!(k > 1 && i > 0 && i < k))
    throw std::out_of_range("alpha_rational: need 0 < i < k");
  const double b = kBeta;
  const double den = 1.0 - std::pow(b, 2 * k + 7) - std::pow(b, 4 * k + 11);
  return (1.0 - std::pow(b, 4 * k - 2 * i + 9) - std::pow(b, 2 * k + 2 * i + 9)) / den;
}

SeriesTable build_series(int K) {
  if (K < 2) throw std::invalid_argument("build_series: K >= 2 required");
  SeriesTable t;
  t.beta = kBeta;
  t.terms = K;
  t.d.resize(K + 2);
  t.d_prime.resize(K + 1);
  t.d_capital.resize(K + 1);

  t.d[0] = -1.0;  // d_{-1}
  const double d0 = 1.0 / (2.0 / kBeta - kBeta - std::pow(kBeta, 3));
  t.d[1] = d0;
  t.d_prime[0] = d0;

  for (int k = 0; k < K; ++k) {
    const AlphaRow row(k);
    double s = 0.0, sp = 0.0;
    for (int i = 0; i <= k; ++i) {
      const double a = row.at(i);
      const double prod = t.d_at(i) * t.d_at(k - i);
      s += a * prod;
      sp += (a - 1.0) * prod;
    }
    t.d[k + 2] = 0.5 * s;
    t.d_prime[k + 1] = 0.5 * sp;
    if (!std::isfinite(t.d[k + 2]))
      throw std::overflow_error("build_series: d_k leaves double range at k=" +
                                std::to_string(k + 1) + "; largest safe K is " +
                                std::to_string(k));
  }

  const double m = big_m();
  t.d_capital[0] = d0;
  t.d_capital[1] = t.d_at(1);
  for (int k = 1; k < K; ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += t.d_capital[i] * t.d_capital[k - i];
    t.d_capital[k + 1] = m * s;
    if (!std::isfinite(t.d_capital[k + 1]))
      throw std::overflow_error("build_series: D_k leaves double range at k=" +
                                std::to_string(k + 1) + "; largest safe K is " +
                                std::to_string(k));
  }
  return t;
}

Complex eval_g(const SeriesTable& t, Complex z) { return eval_g_impl(t, z); }
double eval_g(const SeriesTable& t, double x) { return eval_g_impl(t, x); }

Complex eval_g_hat(const SeriesTable& t, Complex z) { return eval_g_hat_impl(t, z); }
double eval_g_hat(const SeriesTable& t, double x) { return eval_g_hat_impl(t, x); }

Complex eval_g_tilde(const SeriesTable& t, Complex z) {
  return 1.0 - 2.0 * z * eval_g_hat_impl(t, z);
}
double eval_g_tilde(const SeriesTable& t, double x) {
  return 1.0 - 2.0 * x * eval_g_hat_impl(t, x);
}

Complex eval_G(const SeriesTable& t, Complex z) { return eval_G_impl(t, z); }
double eval_G(const SeriesTable& t, double x) { return eval_G_impl(t, x); }

Complex eval_G_series(const SeriesTable& t, Complex z) {
  auto c = [&](int k) { return t.d_capital_at(k); };
  Complex s = horner(t.terms, c, z);
  require_tail("eval_G_series", t.terms, c, std::abs(z));
  return s;
}

RadiusReport find_R(const SeriesTable& t, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_R: tol must be positive");
  double lo = 0.8, hi = 1.0;
  const double flo = eval_g_tilde(t, lo), fhi = eval_g_tilde(t, hi);
  if (!(flo > 0.0 && fhi < 0.0))
    throw BracketFailure("find_R: g~ does not change sign on (4/5, 1); g~(4/5)=" +
                         std::to_string(flo) + ", g~(1)=" + std::to_string(fhi));
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (eval_g_tilde(t, mid) > 0.0 ? lo : hi) = mid;
  }
  RadiusReport rep;
  rep.bracket_lo = lo;
  rep.bracket_hi = hi;
  // Polish past the requested width down to the floating-point sign change and
  // report the endpoint with g~ <= 0, so that eval_h(R) is exactly 0.
  double plo = lo, phi = hi;
  while (true) {
    const double mid = 0.5 * (plo + phi);
    if (mid <= plo || mid >= phi) break;
    (eval_g_tilde(t, mid) > 0.0 ? plo : phi) = mid;
  }
  rep.R = phi;
  rep.residual = std::abs(eval_g_tilde(t, phi));
  rep.z1 = z1_radius(t.d_at(0));
  return rep;
}

double eval_h(const SeriesTable& t, double x) {
  if (!(x > 0.0)) throw std::domain_error("eval_h: x must be positive");
  const double gt = eval_g_tilde(t, x);
  if (gt <= 0.0) {
    if (gt < -1e-9)
      throw std::domain_error("eval_h: x=" + std::to_string(x) +
                              " is beyond the first zero of g~");
    return 0.0;  // continuous extension h(R) = 0
  }
  // h = 1/x - g, but summing d_k converges too slowly near the radius; the
  // identity (1 - x g)^2 = g~ gives h = sqrt(g~)/x, accurate on all of (0, R].
  return std::sqrt(gt) / x;
}

double h_inverse(const SeriesTable& t, double y) {
  if (!(y >= 0.0)) throw std::domain_error("h_inverse: y must be >= 0");
  // h(x) > y on (0, R) is equivalent to g~(x) > (x y)^2, and the difference
  // stays negative past R, so one bisection covers the whole window.
  auto above = [&](double x) { return eval_g_tilde(t, x) - (x * y) * (x * y) > 0.0; };
  double lo = 1e-14, hi = 1.0;
  if (!above(lo))
    throw std::domain_error("h_inverse: y=" + std::to_string(y) +
                            " exceeds h at the lower bracket 1e-14");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (above(mid) ? lo : hi) = mid;
  }
  return hi;  // the g~ <= (xy)^2 side, so h(h_inverse(0)) is exactly 0
}

AlphaBoundReport alpha_bound_check(const SeriesTable& t, int k_max) {
  if (k_max < 2) throw std::invalid_argument("alpha_bound_check: k_max >= 2 required");
  const double b = t.beta;
  AlphaBoundReport rep;
  rep.c = std::max(std::abs(1.0 - alpha(0, 0)),
                   4.0 / 3.0 * (b * b - std::pow(b, 4)));
  rep.worst_margin = std::numeric_limits<double>::infinity();
  rep.sign_pattern_ok = true;
  for (int k = 0; k <= k_max; ++k) {
    const double cap = rep.c * std::pow(b, 2 * k);
    for (int i = 0; i <= k; ++i) {
      const double a = alpha(k, i);
      const double margin = cap - std::abs(1.0 - a);
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_k = k;
        rep.worst_i = i;
      }
      if (i == 0 || i == k) {
        if (a >= 1.0) rep.sign_pattern_ok = false;
      } else {
        if (a <= 1.0) rep.sign_pattern_ok = false;
        const double gap = std::abs(a - alpha_rational(k, i)) / std::abs(a);
        rep.max_form_gap = std::max(rep.max_form_gap, gap);
      }
    }
  }
  rep.pass = rep.sign_pattern_ok && rep.worst_margin >= 0.0 && rep.max_form_gap <= 1e-14;
  return rep;
}

RoucheReport rouche_check(const SeriesTable& t, int grid_points) {
  if (grid_points < 360)
    throw std::invalid_argument("rouche_check: grid_points >= 360 required");
  RoucheReport rep;
  rep.grid_points = grid_points;
  const double dp0 = t.d_prime_at(0), dp1 = t.d_prime_at(1);
  auto ga_real = [&](double x) { return 1.0 - 2.0 * dp0 * x - 2.0 * dp1 * x * x; };

  auto scan = [&](double r, double& max_b, bool& dominance) {
    max_b = 0.0;
    dominance = true;
    for (int j = 0; j < grid_points; ++j) {
      const double th = 2.0 * std::numbers::pi * j / grid_points;
      const Complex z = std::polar(r, th);
      const Complex a = 1.0 - 2.0 * dp0 * z - 2.0 * dp1 * z * z;
      const Complex bb = eval_g_tilde(t, z) - a;
      max_b = std::max(max_b, std::abs(bb));
      dominance = dominance && std::abs(a) > std::abs(bb);
    }
  };
  scan(1.0, rep.max_b_r1, rep.dominance_r1);
  scan(0.8, rep.max_b_r45, rep.dominance_r45);

  rep.ga_m1 = ga_real(-1.0);
  rep.ga_p1 = ga_real(1.0);
  rep.ga_m45 = ga_real(-0.8);
  rep.ga_p45 = ga_real(0.8);

  // roots of the quadratic part: -2 dp1 x^2 - 2 dp0 x + 1 = 0
  const double qa = -2.0 * dp1, qb = -2.0 * dp0;
  const double disc = qb * qb - 4.0 * qa;
  const double r1 = (-qb + std::sqrt(disc)) / (2.0 * qa);
  const double r2 = (-qb - std::sqrt(disc)) / (2.0 * qa);
  rep.ga_real_root = (r2 > 0.5 && r2 < 1.0) ? r2 : r1;

  // published 3-decimal values of the quadratic part at +-1 and +-4/5
  const bool values_ok = std::abs(rep.ga_m1 - 3.170) <= 1e-3 &&
                         std::abs(rep.ga_p1 - (-0.092)) <= 1e-3 &&
                         std::abs(rep.ga_m45 - 2.650) <= 1e-3 &&
                         std::abs(rep.ga_p45 - 0.040) <= 1e-3;
  rep.pass = values_ok && rep.max_b_r1 <= 0.062 && rep.max_b_r45 <= 0.031 &&
             rep.dominance_r1 && rep.dominance_r45;
  return rep;
}

}  // namespace dyadic
