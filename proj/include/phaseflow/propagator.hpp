#ifndef PHASEFLOW_PROPAGATOR_HPP
#define PHASEFLOW_PROPAGATOR_HPP

#include <vector>

#include "phaseflow/grid.hpp"
#include "phaseflow/velocity_field.hpp"

namespace phaseflow {

enum class Scheme { Upwind, UpwindMuscl };

struct SolverOptions {
  double cfl = 0.5;                      // in (0, 1]
  Scheme scheme = Scheme::UpwindMuscl;   // upwind kept for convergence studies
  double node_epsilon = 1e-12;           // plumbed into the velocity sampler
  long max_steps = 200000;
};

struct SolverDiagnostics {
  long steps = 0;
  double min_dt = 0.0;
  double leakage = 0.0;     // time-integrated |boundary flux|
  double mass_drift = 0.0;  // |mass(t_final) - mass(0)| / mass(0)
};

/// Conservative finite-volume integration of d(rho)/dt = -d(v rho)/dx with
/// outflow (zero-gradient) boundaries. Per-step cell mass change equals the
/// face flux difference exactly; dt adapts to cfl * dx / max|v|.
DensityField propagate_fv(const DensityField& rho0, const VelocityField& v,
                          double t_final, const SolverOptions& opts,
                          SolverDiagnostics* diagnostics = nullptr);

struct SeriesResult {
  DensityField density;             // best partial sum
  std::vector<double> term_norms;   // L2 norm of each nested integral term
  bool diverged = false;            // term norms stopped shrinking
};

/// Truncated time-ordered series: rho_0 plus `order` nested integrals of
/// -d/dx(v .), evaluated in the iterated integral form on a uniform time
/// grid of `quadrature_steps` intervals (trapezoid rule per level).
SeriesResult propagate_series(const DensityField& rho0, const VelocityField& v,
                              double t_final, int order, int quadrature_steps);

/// Method-of-characteristics oracle: dx/dt = v along trajectories seeded at
/// cell centers (restricted to rho_0 >= support_floor * peak, refined to
/// n_traj), density reconstructed as rho_0(x_0) / (spacing Jacobian) and
/// resampled onto the grid by monotone interpolation of the log-density.
/// Throws SolverError at the first trajectory crossing (J <= 0).
DensityField propagate_characteristics(const DensityField& rho0,
                                       const VelocityField& v, double t_final,
                                       int n_traj,
                                       double support_floor = 1e-10);

}  // namespace phaseflow

#endif
