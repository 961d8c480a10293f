#ifndef PHASEFLOW_VELOCITY_FIELD_HPP
#define PHASEFLOW_VELOCITY_FIELD_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include <Eigen/Core>

#include "phaseflow/errors.hpp"
#include "phaseflow/wavefield.hpp"

namespace phaseflow {

/// Pure view of v(x,t) = S_x extracted from the phase of psi(x,t,sigma_S).
/// node_epsilon is a relative floor on |psi|^2: the divisor is
/// max(|psi|^2, node_epsilon * envelope_peak(t)), which caps the velocity
/// near nodes without touching any point of non-negligible density.
struct VelocitySampler {
  DoubleSlitWave wave;
  double node_epsilon = 1e-12;
  PacketSelection selection = PacketSelection::Both;
};

/// S(x,t)/hbar as the principal-value argument of psi. Returns nullopt at
/// an exact node (|psi| = 0), where the phase is undefined.
inline std::optional<double> phase(double x, double t,
                                   const DoubleSlitWave& wave) {
  const std::complex<double> p = psi_double(x, t, wave);
  if (std::norm(p) == 0.0) return std::nullopt;
  if (t == 0.0) return 0.0;  // real positive initial wave, no 0/0 path
  return std::arg(p);
}

namespace detail {

template <typename Derived>
Eigen::ArrayXd velocity_impl(const Eigen::ArrayBase<Derived>& x, double t,
                             const VelocitySampler& s) {
  const auto f = make_frame(t, s.wave);
  const double X = s.wave.half_separation_X;
  const double hbar_m = s.wave.constants.hbar / s.wave.constants.mass;
  const Eigen::ArrayXd du = x.derived() - X;
  const double floor = s.node_epsilon * envelope_peak(t, s.wave);
  const Eigen::ArrayXd au = f.amp0 * (-du.square() * f.wr).exp();
  if (s.selection == PacketSelection::UpperOnly) {
    // Same regularized quotient as the two-packet path, so the analytic
    // oracle v = hbar gamma (x-X) / (2 m sigma^2 (1+gamma^2)) checks the
    // real pipeline and not a shortcut. Im(psi' conj(psi)) = 2 wi d |psi|^2
    // for a lone packet.
    const Eigen::ArrayXd au2 = au.square();
    return hbar_m * (2.0 * f.wi * du * au2) / au2.max(floor);
  }
  const Eigen::ArrayXd dl = x.derived() + X;
  const Eigen::ArrayXd al = f.amp0 * (-dl.square() * f.wr).exp();
  const Eigen::ArrayXd au2 = au.square();
  const Eigen::ArrayXd al2 = al.square();
  const Eigen::ArrayXd aual = au * al;
  const Eigen::ArrayXd delta = (du.square() - dl.square()) * f.wi;
  const Eigen::ArrayXd im_dpsi_psi =  // Im(psi' conj(psi))
      f.wi * (du * au2 + dl * al2) +
      2.0 * aual * (X * f.wr * delta.sin() + f.wi * x.derived() * delta.cos());
  const Eigen::ArrayXd dens = 0.5 * (au2 + al2 + 2.0 * aual * delta.cos());
  return hbar_m * im_dpsi_psi / dens.max(floor);
}

}  // namespace detail

/// v(x,t) over an array of positions; odd in x, exactly zero at t = 0.
template <typename Derived>
Eigen::ArrayXd velocity(const Eigen::ArrayBase<Derived>& x, double t,
                        const VelocitySampler& s) {
  if (s.node_epsilon < 0.0)
    throw std::domain_error("VelocitySampler: node_epsilon must be >= 0");
  if (t == 0.0) return Eigen::ArrayXd::Zero(x.size());
  Eigen::ArrayXd v = detail::velocity_impl(x, t, s);
  if (!v.allFinite()) {
    Eigen::Index i = 0;
    for (; i < v.size() && std::isfinite(v[i]); ++i) {
    }
    std::ostringstream msg;
    msg << "velocity: non-finite value at node x=" << x.derived()[i]
        << " m, t=" << t << " s (node_epsilon=" << s.node_epsilon << ")";
    throw SolverError(msg.str());
  }
  return v;
}

inline double velocity(double x, double t, const VelocitySampler& s) {
  Eigen::ArrayXd one(1);
  one[0] = x;
  return velocity(one, t, s)[0];
}

/// Centered difference (v(x+dx) - v(x-dx)) / (2 dx); the -d/dx S_x operator
/// of the truncated series needs this away from nodes.
inline double divergence_term(double x, double t, const VelocitySampler& s,
                              double dx) {
  if (!(dx > 0.0)) throw std::domain_error("divergence_term: dx must be > 0");
  Eigen::ArrayXd pair(2);
  pair[0] = x + dx;
  pair[1] = x - dx;
  const Eigen::ArrayXd v = velocity(pair, t, s);
  return (v[0] - v[1]) / (2.0 * dx);
}

/// Velocity fields consumed by the propagators: any sampler of (x, t).
/// The analytic sampler above is the shipped one; tests inject synthetic
/// fields (e.g. a contracting flow) through the same seam.
using VelocityField =
    std::function<Eigen::ArrayXd(const Eigen::ArrayXd&, double)>;

inline VelocityField make_velocity_field(const VelocitySampler& s) {
  return [s](const Eigen::ArrayXd& x, double t) { return velocity(x, t, s); };
}

}  // namespace phaseflow

#endif
