#pragma once

#include "dyadic/shell.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace dyadic {

// Value of X_{N+1} seen by the last retained mode.  Empty means the plain
// truncation X_{N+1} = 0.  Experiments use this hook to drive the system with
// the analytic profile or to model the lost cascade flux.
using BoundaryClosure = std::function<double(double t, const Eigen::VectorXd& x)>;

struct IntegratorConfig {
  double rtol{1e-10};
  double atol{1e-12};
  double max_step{1.0};
  double min_step{1e-14};
  double t_end{1.0};
  double record_every{0.01};
  BoundaryClosure boundary;
};

// StepUnderflow and NonFinite are expected outcomes near blow-up, so they are
// reported in the trace instead of thrown.
enum class IntegrationStatus { Completed, StepUnderflow, NonFinite, PositivityViolation };

const char* to_string(IntegrationStatus s);

struct StepStats {
  long accepted{0};
  long rejected{0};
  double smallest{std::numeric_limits<double>::infinity()};
  double largest{0.0};
};

struct Trace {
  std::vector<ShellState> samples;
  std::vector<EnergyDecomposition> energies;  // aligned with samples
  StepStats step_stats;
  IntegrationStatus status{IntegrationStatus::Completed};
};

// Adaptive embedded Runge-Kutta 5(4) from initial.t to cfg.t_end (either
// direction; backward runs integrate the reflected system -X(-t) so there is
// one forward code path).  Sample times are strictly monotone and the final
// reached state is always recorded.
Trace integrate(const ShellState& initial, const IntegratorConfig& cfg);

// Forward-only variant for nonnegative data: accepted steps clamp components
// in [-atol, 0) back to zero and the partial energies are checked to be
// nonincreasing; violations beyond tolerance stop the run with
// PositivityViolation.
Trace integrate_positive(const ShellState& initial, const IntegratorConfig& cfg);

// Max absolute residual of the Duhamel identity for mode n over the trace:
//   X_n(t) = X_n(0) e^{-k_n I(t)} + int_0^t e^{-k_n (I(t)-I(s))} k_{n-1} X_{n-1}^2(s) ds,
// I(t) = int_0^t X_{n+1}; all integrals by trapezoid on the sample grid.
double variation_check(const Trace& trace, int n);

}  // namespace dyadic
