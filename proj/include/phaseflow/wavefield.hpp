#ifndef PHASEFLOW_WAVEFIELD_HPP
#define PHASEFLOW_WAVEFIELD_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Core>

#include "phaseflow/constants.hpp"

namespace phaseflow {

/// Two free Gaussian packets released at x = +-X with initial width sigma.
struct DoubleSlitWave {
  double half_separation_X;  ///< meters; slit separation is 2X
  double sigma;              ///< meters; initial packet width
  PhysicalConstants constants{};
};

enum class Packet { Upper, Lower };

/// Which packets feed an evaluation. UpperOnly exists for the analytic
/// single-packet oracles; an enum so a typo cannot silently select Both.
enum class PacketSelection { Both, UpperOnly };

/// gamma = hbar t / (2 m sigma^2), the dimensionless spreading parameter.
inline double gamma(double t, double sigma, const PhysicalConstants& c) {
  if (!(std::isfinite(t) && std::isfinite(sigma)) || t < 0.0 || sigma <= 0.0)
    throw std::domain_error("gamma: require finite t >= 0 and sigma > 0");
  if (!(c.hbar > 0.0) || !(c.mass > 0.0))
    throw std::domain_error("gamma: require hbar > 0 and mass > 0");
  return c.hbar * t / (2.0 * c.mass * sigma * sigma);
}

namespace detail {

/// Real decomposition of one spread Gaussian packet at time t:
///   psi_packet(x) = amp0 * exp(-d^2 wr) * exp(i (d^2 wi + th0)),  d = x -+ X
/// with exponent weight w = wr - i wi so that psi' = -2 d w psi.
/// Everything here is what both |psi|^2 and Im(psi' conj(psi)) need.
struct GaussianFrame {
  double gam;   // hbar t / (2 m sigma^2)
  double wr;    // 1 / (4 sigma^2 (1+gam^2))
  double wi;    // gam * wr
  double amp0;  // (2 pi)^(-1/4) sigma^(-1/2) (1+gam^2)^(-1/4)
  double th0;   // -atan(gam)/2, principal branch of (1+i gam)^(-1/2)
};

inline GaussianFrame make_frame(double t, const DoubleSlitWave& wave) {
  if (!(wave.half_separation_X > 0.0) || !(wave.sigma > 0.0))
    throw std::domain_error("DoubleSlitWave: require X > 0 and sigma > 0");
  GaussianFrame f;
  f.gam = gamma(t, wave.sigma, wave.constants);
  const double den = 1.0 + f.gam * f.gam;
  f.wr = 1.0 / (4.0 * wave.sigma * wave.sigma * den);
  f.wi = f.gam * f.wr;
  f.amp0 = std::pow(2.0 * M_PI, -0.25) / std::sqrt(wave.sigma) /
           std::pow(den, 0.25);
  f.th0 = -0.5 * std::atan(f.gam);
  return f;
}

inline std::complex<double> packet_psi(double d, const GaussianFrame& f) {
  const double a = f.amp0 * std::exp(-d * d * f.wr);
  return std::polar(a, d * d * f.wi + f.th0);
}

}  // namespace detail

/// One packet of Eq.-style form; real and positive at t = 0.
inline std::complex<double> psi_single(double x, double t,
                                       const DoubleSlitWave& wave,
                                       Packet which) {
  const auto f = detail::make_frame(t, wave);
  const double d = which == Packet::Upper ? x - wave.half_separation_X
                                          : x + wave.half_separation_X;
  return detail::packet_psi(d, f);
}

/// Symmetric superposition (psi_up + psi_lw)/sqrt(2).
inline std::complex<double> psi_double(double x, double t,
                                       const DoubleSlitWave& wave) {
  const auto f = detail::make_frame(t, wave);
  const double du = x - wave.half_separation_X;
  const double dl = x + wave.half_separation_X;
  return (detail::packet_psi(du, f) + detail::packet_psi(dl, f)) / std::sqrt(2.0);
}

/// Closed-form d(psi_double)/dx; each packet contributes psi * (-2 d w).
inline std::complex<double> dpsi_dx(double x, double t,
                                    const DoubleSlitWave& wave) {
  const auto f = detail::make_frame(t, wave);
  const std::complex<double> w(f.wr, -f.wi);
  const double du = x - wave.half_separation_X;
  const double dl = x + wave.half_separation_X;
  return (detail::packet_psi(du, f) * (-2.0 * du) * w +
          detail::packet_psi(dl, f) * (-2.0 * dl) * w) /
         std::sqrt(2.0);
}

/// |psi_double|^2 without complex arithmetic:
///   (au^2 + al^2 + 2 au al cos(delta)) / 2,  delta = -4 x X wi.
inline double born_density(double x, double t, const DoubleSlitWave& wave,
                           PacketSelection sel = PacketSelection::Both) {
  const auto f = detail::make_frame(t, wave);
  const double du = x - wave.half_separation_X;
  const double au = f.amp0 * std::exp(-du * du * f.wr);
  if (sel == PacketSelection::UpperOnly) return au * au;
  const double dl = x + wave.half_separation_X;
  const double al = f.amp0 * std::exp(-dl * dl * f.wr);
  const double delta = (du * du - dl * dl) * f.wi;
  return 0.5 * (au * au + al * al + 2.0 * au * al * std::cos(delta));
}

/// Vectorized Born density; accepts any Eigen array expression of x.
template <typename Derived>
Eigen::ArrayXd born_density(const Eigen::ArrayBase<Derived>& x, double t,
                            const DoubleSlitWave& wave,
                            PacketSelection sel = PacketSelection::Both) {
  const auto f = detail::make_frame(t, wave);
  const Eigen::ArrayXd du = x.derived() - wave.half_separation_X;
  const Eigen::ArrayXd au = f.amp0 * (-du.square() * f.wr).exp();
  if (sel == PacketSelection::UpperOnly) return au.square();
  const Eigen::ArrayXd dl = x.derived() + wave.half_separation_X;
  const Eigen::ArrayXd al = f.amp0 * (-dl.square() * f.wr).exp();
  const Eigen::ArrayXd delta = (du.square() - dl.square()) * f.wi;
  return 0.5 * (au.square() + al.square() + 2.0 * au * al * delta.cos());
}

/// Analytic upper bound of the instantaneous |psi|^2 peak,
/// 2/(sqrt(2 pi) sigma sqrt(1+gamma^2)); used as the node-floor scale.
inline double envelope_peak(double t, const DoubleSlitWave& wave) {
  const double g = gamma(t, wave.sigma, wave.constants);
  return 2.0 / (std::sqrt(2.0 * M_PI) * wave.sigma * std::sqrt(1.0 + g * g));
}

}  // namespace phaseflow

#endif
