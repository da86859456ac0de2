#pragma once

#include "dyadic/series.hpp"

#include <Eigen/Core>

namespace dyadic {

enum class Classification { Critical, DivergesOddUp, DivergesEvenUp };

const char* to_string(Classification c);

// Coefficients of X_n(t) = a_n / (t - t0).  a holds a_1..a_N with
// a_1..a_{n0} = 0; for n > n0, a_n = 2^{-n} h(beta^{2(n-n0)} R).
struct SelfSimilarProfile {
  int n0{};
  double t0{};
  Eigen::VectorXd a;  // a[i] is a_{i+1}
  double gamma{};     // h(beta^2 R) = 2^{n0+1} a_{n0+1}
  double c_n0{};      // beta^{2 n0} / R, the limit of a_n / beta^n
};

// Rescaled coefficient orbit ~a_{n+1} = 2 + 4 ~a_{n-1}^2 / ~a_n, ~a_0 = 0,
// together with the lambda diagnostics lambda_n = h^{-1}(~a_n).
struct TildeTrace {
  Eigen::VectorXd a_tilde;       // index n starting at ~a_0 = 0
  Eigen::VectorXd lambda;        // filled by lambda_diagnostics
  Eigen::VectorXd lambda_prime;  // lambda'_n = log lambda_n - log lambda_{n-1} - log beta^2
  Classification classification{Classification::Critical};
};

struct LambdaReport {
  bool pass{};
  double k_lower{};             // K = 1/2 - 1/h(beta^8 R), the contraction margin
  double lambda_prime_max{};    // max_n |lambda'_n|
  bool alternating{};           // consecutive lambda' signs flip from n = 2 on
  double min_two_step_ratio{};  // min over n >= 3 of |lambda'_{n+2}| / |lambda'_n|
  int n_used{};                 // lambda entries inside the invertible window
};

// A term above threshold * (2 beta)^n declares divergence; the critical orbit
// grows exactly like (2 beta)^n / R, so the margin separates the classes.
inline constexpr double kDivergenceThreshold = 1e8;

// Runs the rescaled recurrence for count steps (early stop on divergence) and
// tags the outcome.  Never throws on overflow.
TildeTrace tilde_sequence(double a1, int count);

// Same orbit, explicit threshold; throws InconclusiveClassification when the
// orbit has left the critical envelope but count stopped before the threshold.
Classification classify(double a1, int count, double threshold);

// Bisection on a1 with classify as the side oracle; bracket from a coarse
// scan of (0, 4].
double gamma_by_shooting(double tol);

// gamma = h(beta^2 R).
double gamma_by_series(const SeriesTable& table);

SelfSimilarProfile build_profile(int n0, double t0, int n_modes, const SeriesTable& table);

// Fills trace.lambda / trace.lambda_prime (while ~a_n stays within h's
// invertible window) and checks the dichotomy: critical orbits have
// lambda' = 0, divergent ones alternate with two-step growth >= 1 + K.
LambdaReport lambda_diagnostics(TildeTrace& trace, const SeriesTable& table);

}  // namespace dyadic
