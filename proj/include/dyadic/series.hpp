#pragma once

#include <Eigen/Core>

#include <complex>

namespace dyadic {

using Complex = std::complex<double>;

// Coefficient tables for the generating functions
//   g(x)  = sum_{k>=0} d_k x^k          (radius R)
//   g^(z) = sum_{k>=0} d'_k z^k         (radius > 1)
//   g~(z) = 1 - 2 z g^(z)
//   G(z)  = sum_{k>=0} D_k z^k          (radius z1 > beta^2)
//   h(x)  = 1/x - g(x) = sqrt(g~(x))/x  on (0, R]
// with beta = 2^{-1/3}.
struct SeriesTable {
  double beta{};
  Eigen::VectorXd d;          // d_{-1} .. d_K, stored with offset 1
  Eigen::VectorXd d_prime;    // d'_0 .. d'_K
  Eigen::VectorXd d_capital;  // D_0 .. D_K
  int terms{};                // K

  double d_at(int k) const { return d[k + 1]; }
  double d_prime_at(int k) const { return d_prime[k]; }
  double d_capital_at(int k) const { return d_capital[k]; }
};

struct RadiusReport {
  double R{};
  double bracket_lo{}, bracket_hi{};
  double residual{};  // |g~(R)|
  double z1{};        // convergence radius of G
};

struct AlphaBoundReport {
  bool pass{};
  double c{};             // bound constant: max(|1-alpha_{0,0}|, (4/3)(beta^2-beta^4))
  double worst_margin{};  // min over (k,i) of c*beta^{2k} - |1-alpha_{k,i}|
  int worst_k{}, worst_i{};
  double max_form_gap{};  // worst relative disagreement of the two alpha formulas
  bool sign_pattern_ok{};
};

struct RoucheReport {
  bool pass{};
  int grid_points{};
  double max_b_r1{}, max_b_r45{};  // grid max of |g~_B| on |z|=1 and |z|=4/5
  double ga_m1{}, ga_p1{}, ga_m45{}, ga_p45{};
  bool dominance_r1{}, dominance_r45{};  // |g~_A| > |g~_B| pointwise on the grid
  double ga_real_root{};                 // root of g~_A in (4/5, 1)
};

// Convolution weight alpha_{k,i}, 0 <= i <= k; cosh closed form.
double alpha(int k, int i);
// Equivalent rational form, defined for 0 < i < k; cross-check for alpha().
double alpha_rational(int k, int i);

// Fills d, d', D up to index K (K >= 2) from
//   d_{-1} = -1,  d_0 = (2/beta - beta - beta^3)^{-1},
//   d_{k+1}  = 1/2 sum_i alpha_{k,i} d_i d_{k-i},
//   d'_{k+1} = 1/2 sum_i (alpha_{k,i} - 1) d_i d_{k-i},  d'_0 = d_0,
//   D_0 = d_0, D_1 = d_1, D_{k+1} = M sum_i D_i D_{k-i},  M = alpha_{2,1}/2.
SeriesTable build_series(int K);

Complex eval_g(const SeriesTable& t, Complex z);
Complex eval_g_hat(const SeriesTable& t, Complex z);
Complex eval_g_tilde(const SeriesTable& t, Complex z);
Complex eval_G(const SeriesTable& t, Complex z);         // closed form
Complex eval_G_series(const SeriesTable& t, Complex z);  // partial sum of D_k

double eval_g(const SeriesTable& t, double x);
double eval_g_hat(const SeriesTable& t, double x);
double eval_g_tilde(const SeriesTable& t, double x);
double eval_G(const SeriesTable& t, double x);

// Bisection for the unique root of g~ in (4/5, 1); the bracket is reported at
// width tol, the returned R is polished to the floating-point sign-change.
RadiusReport find_R(const SeriesTable& t, double tol);

// h(x) on (0, R]; evaluated as sqrt(g~(x))/x, with h = 0 where g~ <= 0.
double eval_h(const SeriesTable& t, double x);

// Monotone inverse of h on [0, h(1e-14)); h_inverse(0) = R.
double h_inverse(const SeriesTable& t, double y);

AlphaBoundReport alpha_bound_check(const SeriesTable& t, int k_max);
RoucheReport rouche_check(const SeriesTable& t, int grid_points);

}  // namespace dyadic
