#include "dyadic/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dyadic {

namespace {

// Dormand-Prince 5(4) tableau.  The 7th stage equals the derivative at the
// new point, so it is reused as stage 1 of the next step (FSAL).
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0;
constexpr double kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0;
constexpr double kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0;
constexpr double kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0;
constexpr double kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

// PI step control constants (Hairer-Norsett-Wanner style).
constexpr double kBetaPi = 0.04;
constexpr double kExpo1 = 0.2 - kBetaPi * 0.75;
constexpr double kSafe = 0.9;
constexpr double kFacShrink = 5.0;  // at most 5x shrink per step
constexpr double kFacGrow = 10.0;   // at most 10x growth per step

using Vec = Eigen::VectorXd;
using Rhs = std::function<Vec(double, const Vec&)>;

void check_config(const IntegratorConfig& cfg) {
  if (!(cfg.rtol > 0.0) || !(cfg.atol > 0.0))
    throw std::invalid_argument("integrate: rtol and atol must be positive");
  if (!(cfg.min_step >= 0.0) || !(cfg.min_step <= cfg.max_step))
    throw std::invalid_argument("integrate: need 0 <= min_step <= max_step");
  if (!(cfg.record_every > 0.0))
    throw std::invalid_argument("integrate: record_every must be positive");
  if (!std::isfinite(cfg.t_end))
    throw std::invalid_argument("integrate: t_end must be finite");
}

double scaled_rms(const Vec& v, const Vec& scale) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double q = v[i] / scale[i];
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(v.size()));
}

// Starting step size estimate from the local derivative and curvature.
double initial_step(const Rhs& f, double t, const Vec& y, const Vec& f0,
                    const IntegratorConfig& cfg) {
  Vec scale = (cfg.atol + cfg.rtol * y.cwiseAbs().array()).matrix();
  const double dny = scaled_rms(y, scale);
  const double dnf = scaled_rms(f0, scale);
  double h0 = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
  h0 = std::min(h0, cfg.max_step);
  Vec y1 = y + h0 * f0;
  Vec f1 = f(t + h0, y1);
  double h1;
  if (!f1.allFinite()) {
    h1 = h0 * 1e-3;
  } else {
    const double der2 = scaled_rms(f1 - f0, scale) / h0;
    const double der12 = std::max(der2, dnf);
    h1 = (der12 <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / der12, 0.2);
  }
  return std::min({100.0 * h0, h1, cfg.max_step});
}

Trace run_forward(const ShellState& initial, const IntegratorConfig& cfg, const Rhs& f,
                  bool positive) {
  const int n = initial.n_modes;
  Trace tr;
  auto record = [&](double t, const Vec& x) {
    ShellState s;
    s.t = t;
    s.x = x;
    s.n_modes = n;
    tr.energies.push_back(energy(s));
    tr.samples.push_back(std::move(s));
  };

  double t = initial.t;
  Vec y = initial.x;
  record(t, y);

  Vec k1 = f(t, y);
  if (!k1.allFinite()) {
    tr.status = IntegrationStatus::NonFinite;
    return tr;
  }

  double h = std::clamp(initial_step(f, t, y, k1, cfg), cfg.min_step, cfg.max_step);
  double facold = 1e-4;
  bool rejected_last = false;
  bool nonfinite_last = false;
  double last_record = t;

  Vec k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), errv(n), scale(n);

  while (t < cfg.t_end) {
    h = std::clamp(h, cfg.min_step, cfg.max_step);
    bool final_step = false;
    if (t + h >= cfg.t_end) {
      h = cfg.t_end - t;
      final_step = true;
    }
    if (!(t + h > t)) {
      // Step no longer advances t in floating point.
      tr.status = nonfinite_last ? IntegrationStatus::NonFinite : IntegrationStatus::StepUnderflow;
      break;
    }

    ytmp = y + h * (kA21 * k1);
    k2 = f(t + kC2 * h, ytmp);
    ytmp = y + h * (kA31 * k1 + kA32 * k2);
    k3 = f(t + kC3 * h, ytmp);
    ytmp = y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3);
    k4 = f(t + kC4 * h, ytmp);
    ytmp = y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
    k5 = f(t + kC5 * h, ytmp);
    ytmp = y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5);
    k6 = f(t + h, ytmp);
    ynew = y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    k7 = f(t + h, ynew);

    double err = std::numeric_limits<double>::infinity();
    const bool finite = ynew.allFinite() && k7.allFinite();
    if (finite) {
      errv = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
      scale = (cfg.atol + cfg.rtol * y.cwiseAbs().cwiseMax(ynew.cwiseAbs()).array()).matrix();
      err = scaled_rms(errv, scale);
      if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
    }

    if (err <= 1.0) {
      const double fac11 = std::pow(err, kExpo1);
      double fac = fac11 / std::pow(facold, kBetaPi);
      fac = std::clamp(fac / kSafe, 1.0 / kFacGrow, kFacShrink);
      double hnew = h / fac;
      if (rejected_last) hnew = std::min(hnew, h);
      facold = std::max(err, 1e-4);
      rejected_last = false;
      nonfinite_last = false;

      bool refresh_k1 = false;
      if (positive) {
        bool violated = false;
        for (Eigen::Index i = 0; i < ynew.size(); ++i) {
          if (ynew[i] < 0.0) {
            if (ynew[i] >= -cfg.atol) {
              ynew[i] = 0.0;
              refresh_k1 = true;
            } else {
              violated = true;
            }
          }
        }
        if (!violated) {
          // Partial energies must not grow on a nonnegative orbit.
          double acc_old = 0.0, acc_new = 0.0;
          for (Eigen::Index i = 0; i < ynew.size(); ++i) {
            acc_old += y[i] * y[i];
            acc_new += ynew[i] * ynew[i];
            if (acc_new > acc_old + 100.0 * (cfg.atol + cfg.rtol * acc_old)) {
              violated = true;
              break;
            }
          }
        }
        if (violated) {
          tr.status = IntegrationStatus::PositivityViolation;
          break;
        }
      }

      t = final_step ? cfg.t_end : t + h;
      y.swap(ynew);
      k1 = refresh_k1 ? f(t, y) : k7;
      ++tr.step_stats.accepted;
      tr.step_stats.smallest = std::min(tr.step_stats.smallest, h);
      tr.step_stats.largest = std::max(tr.step_stats.largest, h);

      if (final_step || t - last_record >= cfg.record_every * (1.0 - 1e-12)) {
        record(t, y);
        last_record = t;
      }
      h = hnew;
    } else {
      ++tr.step_stats.rejected;
      rejected_last = true;
      double hnew;
      if (finite) {
        const double fac11 = std::pow(err, kExpo1);
        hnew = h / std::min(kFacShrink, fac11 / kSafe);
      } else {
        nonfinite_last = true;
        hnew = 0.5 * h;
      }
      if (hnew < cfg.min_step || !(t + hnew > t)) {
        tr.status =
            nonfinite_last ? IntegrationStatus::NonFinite : IntegrationStatus::StepUnderflow;
        break;
      }
      h = hnew;
    }
  }

  if (tr.samples.back().t != t) record(t, y);
  return tr;
}

Rhs make_rhs(const IntegratorConfig& cfg) {
  if (cfg.boundary) {
    return [b = cfg.boundary](double t, const Vec& x) {
      return rhs_with_boundary(x, b(t, x));
    };
  }
  return [](double, const Vec& x) { return rhs_with_boundary(x, 0.0); };
}

}  // namespace

const char* to_string(IntegrationStatus s) {
  switch (s) {
    case IntegrationStatus::Completed: return "completed";
    case IntegrationStatus::StepUnderflow: return "step_underflow";
    case IntegrationStatus::NonFinite: return "non_finite";
    case IntegrationStatus::PositivityViolation: return "positivity_violation";
  }
  return "unknown";
}

Trace integrate(const ShellState& initial, const IntegratorConfig& cfg) {
  validate(initial);
  check_config(cfg);
  if (cfg.t_end == initial.t)
    throw std::invalid_argument("integrate: t_end must differ from initial.t");

  if (cfg.t_end > initial.t) return run_forward(initial, cfg, make_rhs(cfg), false);

  // Backward run: Y(s) = -X(-s) satisfies the same equations because the
  // right-hand side is even, so integrate Y forward and map the trace back.
  ShellState mirrored;
  mirrored.t = -initial.t;
  mirrored.x = -initial.x;
  mirrored.n_modes = initial.n_modes;
  IntegratorConfig mcfg = cfg;
  mcfg.t_end = -cfg.t_end;
  if (cfg.boundary) {
    mcfg.boundary = [b = cfg.boundary](double s, const Vec& w) {
      return -b(-s, (-w).eval());
    };
  }
  Trace tr = run_forward(mirrored, mcfg, make_rhs(mcfg), false);
  for (auto& s : tr.samples) {
    s.t = -s.t;
    s.x = -s.x;
  }
  return tr;
}

Trace integrate_positive(const ShellState& initial, const IntegratorConfig& cfg) {
  validate(initial);
  check_config(cfg);
  if ((initial.x.array() < 0.0).any())
    throw std::invalid_argument("integrate_positive: initial data must be nonnegative");
  if (!(cfg.t_end > initial.t))
    throw std::invalid_argument("integrate_positive: t_end must exceed initial.t");
  return run_forward(initial, cfg, make_rhs(cfg), true);
}

double variation_check(const Trace& trace, int n) {
  const auto& smp = trace.samples;
  if (smp.empty()) throw std::invalid_argument("variation_check: empty trace");
  const int n_modes = smp.front().n_modes;
  if (n < 1 || n > n_modes - 1)
    throw std::out_of_range("variation_check: need 1 <= n <= n_modes - 1");
  const auto m = smp.size();
  if (m < 2) return 0.0;
  for (std::size_t j = 1; j < m; ++j)
    if (!(smp[j].t > smp[j - 1].t))
      throw std::invalid_argument("variation_check: trace times must increase");

  const double kn = wavenumber<double>(n);
  const double knm1 = wavenumber<double>(n - 1);
  // 0-based columns: X_n = x[n-1], X_{n+1} = x[n], X_{n-1} = x[n-2] (zero for n = 1).
  auto xnext = [&](std::size_t j) { return smp[j].x[n]; };
  auto xprev = [&](std::size_t j) { return n >= 2 ? smp[j].x[n - 2] : 0.0; };

  std::vector<double> acc(m, 0.0);  // I(t_j) = int of X_{n+1} from t_0
  for (std::size_t j = 1; j < m; ++j)
    acc[j] = acc[j - 1] + 0.5 * (smp[j].t - smp[j - 1].t) * (xnext(j) + xnext(j - 1));

  const double x0 = smp.front().x[n - 1];
  double worst = 0.0;
  std::vector<double> g(m);
  for (std::size_t q = 1; q < m; ++q) {
    for (std::size_t j = 0; j <= q; ++j)
      g[j] = std::exp(-kn * (acc[q] - acc[j])) * knm1 * xprev(j) * xprev(j);
    double duhamel = 0.0;
    for (std::size_t j = 1; j <= q; ++j)
      duhamel += 0.5 * (smp[j].t - smp[j - 1].t) * (g[j] + g[j - 1]);
    const double predicted = x0 * std::exp(-kn * acc[q]) + duhamel;
    worst = std::max(worst, std::abs(smp[q].x[n - 1] - predicted));
  }
  return worst;
}

}  // namespace dyadic
