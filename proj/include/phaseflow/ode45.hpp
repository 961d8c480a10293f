#ifndef PHASEFLOW_ODE45_HPP
#define PHASEFLOW_ODE45_HPP

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Core>

#include "phaseflow/errors.hpp"

namespace phaseflow {

using OdeRhs = std::function<Eigen::ArrayXd(const Eigen::ArrayXd&, double)>;

namespace detail {

/// Hairer's starting-step heuristic (as in solve_ivp).
inline double initial_step(const OdeRhs& f, const Eigen::ArrayXd& y0,
                           const Eigen::ArrayXd& f0, double t0, double span,
                           double rtol, double atol) {
  const auto scale = (atol + rtol * y0.abs()).eval();
  const double n = static_cast<double>(y0.size());
  const double d0 = std::sqrt((y0 / scale).square().sum() / n);
  const double d1 = std::sqrt((f0 / scale).square().sum() / n);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  const Eigen::ArrayXd y1 = y0 + h0 * f0;
  const Eigen::ArrayXd f1 = f(y1, t0 + h0);
  const double d2 = std::sqrt(((f1 - f0) / scale).square().sum() / n) / h0;
  double h1 = (d1 <= 1e-15 && d2 <= 1e-15)
                  ? std::max(1e-6, h0 * 1e-3)
                  : std::pow(0.01 / std::max(d1, d2), 0.2);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace detail

/// Dormand-Prince 5(4) with one shared adaptive step for the whole system
/// (RMS error norm over all components). Returns y(t1).
inline Eigen::ArrayXd integrate_dp45(const OdeRhs& f, Eigen::ArrayXd y,
                                     double t0, double t1, double rtol,
                                     double atol, long max_steps = 1000000) {
  static const double A[6][6] = {
      {0, 0, 0, 0, 0, 0},
      {1.0 / 5, 0, 0, 0, 0, 0},
      {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
      {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
       -5103.0 / 18656, 0}};
  static const double C[6] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0};
  static const double B[6] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192,
                              -2187.0 / 6784, 11.0 / 84};
  static const double E[7] = {71.0 / 57600,     0,          -71.0 / 16695,
                              71.0 / 1920,      -17253.0 / 339200,
                              22.0 / 525,       -1.0 / 40};

  const double span = t1 - t0;
  if (span == 0.0) return y;
  const double n = static_cast<double>(y.size());
  double t = t0;
  Eigen::ArrayXd k[7];
  k[0] = f(y, t);
  double h = detail::initial_step(f, y, k[0], t0, span, rtol, atol);

  for (long step = 0; step < max_steps; ++step) {
    if (t >= t1) return y;
    h = std::min(h, t1 - t);
    // stages
    Eigen::ArrayXd ytmp;
    for (int i = 1; i < 6; ++i) {
      ytmp = y;
      for (int j = 0; j < i; ++j)
        if (A[i][j] != 0.0) ytmp += (h * A[i][j]) * k[j];
      k[i] = f(ytmp, t + C[i] * h);
    }
    Eigen::ArrayXd ynew = y;
    for (int i = 0; i < 6; ++i)
      if (B[i] != 0.0) ynew += (h * B[i]) * k[i];
    k[6] = f(ynew, t + h);  // FSAL stage, also the error estimate's last term
    Eigen::ArrayXd err = Eigen::ArrayXd::Zero(y.size());
    for (int i = 0; i < 7; ++i)
      if (E[i] != 0.0) err += (h * E[i]) * k[i];
    const auto scale = (atol + rtol * y.abs().max(ynew.abs())).eval();
    const double norm = std::sqrt((err / scale).square().sum() / n);
    if (norm < 1.0) {
      t += h;
      y = std::move(ynew);
      k[0] = k[6];
      const double factor =
          (norm == 0.0) ? 10.0
                        : std::min(10.0, std::max(0.2, 0.9 * std::pow(norm, -0.2)));
      h *= factor;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(norm, -0.2));
      if (!(h > 0.0) || t + h == t)
        throw SolverError("ode45: step size underflow");
    }
  }
  throw SolverError("ode45: exceeded max step count");
}

}  // namespace phaseflow

#endif
