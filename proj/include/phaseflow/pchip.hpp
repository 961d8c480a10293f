#ifndef PHASEFLOW_PCHIP_HPP
#define PHASEFLOW_PCHIP_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>

namespace phaseflow {

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson
/// derivatives, the weighted-harmonic-mean variant). Shape preserving:
/// never overshoots the data, which is what the characteristics resampler
/// needs on steep fringe walls. Evaluation outside [x0, xN] returns NaN.
class Pchip {
 public:
  Pchip(Eigen::ArrayXd x, Eigen::ArrayXd y)
      : x_(std::move(x)), y_(std::move(y)), d_(x_.size()) {
    const Eigen::Index n = x_.size();
    if (n < 2 || y_.size() != n)
      throw std::invalid_argument("pchip: need two or more matching points");
    for (Eigen::Index i = 0; i + 1 < n; ++i)
      if (!(x_[i + 1] > x_[i]))
        throw std::invalid_argument("pchip: abscissae must increase strictly");
    const Eigen::ArrayXd h = x_.tail(n - 1) - x_.head(n - 1);
    const Eigen::ArrayXd m = (y_.tail(n - 1) - y_.head(n - 1)) / h;
    if (n == 2) {
      d_[0] = d_[1] = m[0];
      return;
    }
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
      if (m[i - 1] * m[i] <= 0.0) {
        d_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d_[i] = (w1 + w2) / (w1 / m[i - 1] + w2 / m[i]);
      }
    }
    d_[0] = edge(h[0], h[1], m[0], m[1]);
    d_[n - 1] = edge(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
  }

  double operator()(double xq) const {
    const Eigen::Index n = x_.size();
    if (!(xq >= x_[0]) || !(xq <= x_[n - 1]))
      return std::numeric_limits<double>::quiet_NaN();
    // rightmost interval with x_[i] <= xq
    Eigen::Index lo = 0, hi = n - 1;
    while (hi - lo > 1) {
      const Eigen::Index mid = (lo + hi) / 2;
      (x_[mid] <= xq ? lo : hi) = mid;
    }
    const double h = x_[lo + 1] - x_[lo];
    const double t = (xq - x_[lo]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[lo] + (t3 - 2 * t2 + t) * h * d_[lo] +
           (-2 * t3 + 3 * t2) * y_[lo + 1] + (t3 - t2) * h * d_[lo + 1];
  }

  Eigen::ArrayXd operator()(const Eigen::ArrayXd& xq) const {
    Eigen::ArrayXd out(xq.size());
    for (Eigen::Index i = 0; i < xq.size(); ++i) out[i] = (*this)(xq[i]);
    return out;
  }

 private:
  // Three-point one-sided derivative, clipped to preserve monotonicity.
  static double edge(double h0, double h1, double m0, double m1) {
    double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (sign(d) != sign(m0))
      d = 0.0;
    else if (sign(m0) != sign(m1) && std::abs(d) > 3.0 * std::abs(m0))
      d = 3.0 * m0;
    return d;
  }
  static int sign(double v) { return (v > 0.0) - (v < 0.0); }

  Eigen::ArrayXd x_, y_, d_;
};

}  // namespace phaseflow

#endif
