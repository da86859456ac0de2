#pragma once

#include "dyadic/integrator.hpp"
#include "dyadic/selfsimilar.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace dyadic {

// Geometric envelope certifying energy dissipation from bounded data:
// s_n = 2^{-n/4}, a_n = C 2^{-n/4} with the smallest C satisfying
//   2^n s_n a_n^2 >= 2 m_n^2 m_{n+2} (1 + 1/(2^n s_n m_{n+2})),  m_n = L sqrt(n).
struct DissipationBudget {
  double L{0.0};
  Eigen::VectorXd s;         // entry i holds s_{i+1}
  Eigen::VectorXd a_budget;  // entry i holds a_{i+1}
  double C{0.0};

  int n_max() const { return static_cast<int>(s.size()); }
  double s_at(int n) const { return s[n - 1]; }
  double a_at(int n) const { return a_budget[n - 1]; }
};

struct ExperimentReport {
  std::string name;
  std::map<std::string, double> params;
  std::map<std::string, double> scalars;
  bool pass{false};
  std::vector<std::string> artifacts;
};

nlohmann::ordered_json report_json(const ExperimentReport& rep);

// X_{N+1} = 2^{-1/3} X_N: continues the cascade at the K41 slope so the
// truncated system keeps shedding energy instead of conserving it.
BoundaryClosure absorbing_closure();

// X_{N+1}(t) = a_top / (t - t0): closes the hierarchy with the analytic
// self-similar tail, making the finite section follow the infinite solution.
BoundaryClosure profile_drive(double a_top, double t0);

DissipationBudget build_budget(double L, int n_max);

// Flat data X_n = L integrated (absorbing closure) to t = eps^-2 sum_{k>=M} s_k;
// checks phi_N(t) <= phi_{M-1}(0) + eps sum_{n>=M} a_n.
ExperimentReport dissipation_experiment(double L, int n_modes, int M, double eps,
                                        const std::string& out_dir = "");

// Reports sup over t in [1, t_max] of t^2 |X(t)|^2; passes when the running
// sup gains less than 5% over the last decade.  Empty boundary uses the
// absorbing closure (plain truncation conserves energy and cannot decay).
ExperimentReport decay_upper_experiment(const ShellState& initial, double t_max,
                                        const BoundaryClosure& boundary = {},
                                        const std::string& out_dir = "");

// Accumulates I(t) = int_1^t X_{n+1} and compares it against log(t)/k_n; the
// run passes when I grows at least logarithmically through the last decade,
// which keeps I(t) - log(t)/k_n bounded below (the bound is reported).
ExperimentReport decay_lower_experiment(const ShellState& initial, int n, double t_max,
                                        const BoundaryClosure& boundary = {},
                                        const std::string& out_dir = "",
                                        double record_every = 0.02);

// Negative mirror of the decaying profile: Y_n(t) = a_n/(t - t0) for t < t0,
// driven by the analytic tail value.  Confirms every component grows by 1e6,
// matches the closed form to 1e-4 while |Y| <= 1e3, and that the run ends in
// StepUnderflow at the singular time.
ExperimentReport blowup_demo(int n0, double t0, int n_modes,
                             const std::string& out_dir = "");

// From the same initial data, the driven run gains energy without bound while
// the plain Galerkin truncation conserves it exactly: two solutions of the
// untruncated limit from one state.
ExperimentReport coalescence_demo(int n0, double t0, int n_modes,
                                  const std::string& out_dir = "");

}  // namespace dyadic
