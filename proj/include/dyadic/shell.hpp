#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace dyadic {

// State of the truncated cascade at one instant.  Modes are 1-based: x(0)
// holds X_1 and x(n_modes-1) holds X_N.  X_0 and X_{N+1} are implicit zeros
// and never stored.
template <typename Scalar>
struct ShellStateT {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Scalar t{0};
  Vec x;
  int n_modes{0};
};

using ShellState = ShellStateT<double>;

template <typename Scalar>
struct EnergyDecompositionT {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vec partial;   // phi_n = sum_{j<=n} x_j^2 for n = 1..N
  Scalar total;  // phi_N
};

using EnergyDecomposition = EnergyDecompositionT<double>;

// 2^n, exact in binary floating point.
template <typename Scalar = double>
Scalar wavenumber(int n) {
  if (n < 0) throw std::invalid_argument("wavenumber: n must be >= 0");
  if (n > 1023) throw std::overflow_error("wavenumber: 2^n overflows for n > 1023");
  return std::ldexp(Scalar(1), n);
}

template <typename Scalar>
void validate(const ShellStateT<Scalar>& s) {
  if (s.n_modes <= 0) throw std::invalid_argument("ShellState: n_modes must be positive");
  if (s.x.size() != s.n_modes)
    throw std::invalid_argument("ShellState: x length does not match n_modes");
  if (!s.x.allFinite() || !std::isfinite(static_cast<double>(s.t)))
    throw std::invalid_argument("ShellState: non-finite entries");
}

// Right-hand side with an explicit neighbour value for the last mode,
// x_top = X_{N+1}.  Accepts any dense Eigen expression.
template <typename Derived, typename Scalar = typename Derived::Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rhs_with_boundary(const Eigen::MatrixBase<Derived>& x,
                                                           Scalar x_top) {
  const Eigen::Index n = x.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> f(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar prev = i > 0 ? x[i - 1] : Scalar(0);          // X_0 = 0
    const Scalar next = i + 1 < n ? x[i + 1] : x_top;          // X_{N+1}
    const Scalar k_prev = std::ldexp(Scalar(1), static_cast<int>(i));      // k_{n-1} = 2^{n-1}
    const Scalar k_here = std::ldexp(Scalar(1), static_cast<int>(i) + 1);  // k_n = 2^n
    f[i] = k_prev * prev * prev - k_here * x[i] * next;
  }
  return f;
}

// d/dt X_n = k_{n-1} X_{n-1}^2 - k_n X_n X_{n+1} with X_0 = X_{N+1} = 0.
template <typename Scalar>
typename ShellStateT<Scalar>::Vec rhs(const ShellStateT<Scalar>& s) {
  validate(s);
  return rhs_with_boundary(s.x, Scalar(0));
}

template <typename Scalar>
EnergyDecompositionT<Scalar> energy(const ShellStateT<Scalar>& s) {
  validate(s);
  EnergyDecompositionT<Scalar> e;
  e.partial.resize(s.n_modes);
  Scalar acc(0);
  for (int i = 0; i < s.n_modes; ++i) {
    acc += s.x[i] * s.x[i];
    e.partial[i] = acc;
  }
  e.total = acc;
  return e;
}

// k_n X_n^2 X_{n+1}, the energy flux through level n (1 <= n <= N-1).
// Note d/dt phi_n = -2 k_n X_n^2 X_{n+1} = -2 * flux(s, n).
template <typename Scalar>
Scalar flux(const ShellStateT<Scalar>& s, int n) {
  validate(s);
  if (n < 1 || n >= s.n_modes) throw std::out_of_range("flux: need 1 <= n <= N-1");
  return wavenumber<Scalar>(n) * s.x[n - 1] * s.x[n - 1] * s.x[n];
}

}  // namespace dyadic
