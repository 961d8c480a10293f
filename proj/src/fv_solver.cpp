#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "phaseflow/propagator.hpp"

namespace phaseflow {
namespace {

// Face fluxes for d(rho)/dt = -d(v rho)/dx with zero-gradient ghost cells.
// Upwind picks the donor cell; MUSCL reconstructs van-Leer-limited linear
// states. Returns the flux divergence plus the two boundary fluxes.
struct FluxResult {
  Eigen::ArrayXd div;
  double left;
  double right;
};

FluxResult flux_divergence(const Eigen::ArrayXd& u, const Eigen::ArrayXd& vf,
                           double dx, Scheme scheme) {
  const Eigen::Index n = u.size();
  Eigen::ArrayXd ug(n + 2);  // one ghost layer each side
  ug[0] = u[0];
  ug.segment(1, n) = u;
  ug[n + 1] = u[n - 1];

  Eigen::ArrayXd lv(n + 1), rv(n + 1);
  if (scheme == Scheme::Upwind) {
    lv = ug.head(n + 1);
    rv = ug.tail(n + 1);
  } else {
    Eigen::ArrayXd sl(n + 2);  // limited slope per extended cell
    for (Eigen::Index i = 0; i < n + 2; ++i) {
      const double um = i == 0 ? ug[0] : ug[i - 1];
      const double up = i == n + 1 ? ug[n + 1] : ug[i + 1];
      const double dm = ug[i] - um;
      const double dp = up - ug[i];
      sl[i] = dm * dp > 0.0 ? 2.0 * dm * dp / (dm + dp) : 0.0;
    }
    lv = (ug + 0.5 * sl).head(n + 1);
    rv = (ug - 0.5 * sl).tail(n + 1);
  }
  const Eigen::ArrayXd flux = (vf >= 0.0).select(vf * lv, vf * rv);
  return {-(flux.tail(n) - flux.head(n)) / dx, flux[0], flux[n]};
}

}  // namespace

DensityField propagate_fv(const DensityField& rho0, const VelocityField& v,
                          double t_final, const SolverOptions& opts,
                          SolverDiagnostics* diagnostics) {
  if (!(opts.cfl > 0.0) || opts.cfl > 1.0)
    throw ConfigError("solver: cfl must lie in (0, 1]");
  if (opts.max_steps < 1) throw ConfigError("solver: max_steps must be >= 1");
  if (!(t_final >= rho0.time))
    throw ConfigError("solver: t_final must not precede the field time");

  SolverDiagnostics diag;
  diag.min_dt = std::numeric_limits<double>::infinity();
  if (t_final == rho0.time) {
    diag.min_dt = 0.0;
    if (diagnostics) *diagnostics = diag;
    return rho0;
  }

  const double dx = rho0.grid.dx();
  const Eigen::ArrayXd faces = rho0.grid.faces();
  const double span = t_final - rho0.time;
  const double mass0 = rho0.values.sum() * dx;
  Eigen::ArrayXd rho = rho0.values;
  double t = rho0.time;
  double vmax_last = 0.0;

  while (t < t_final - 1e-14 * span) {
    const double rem = t_final - t;
    double dt = vmax_last <= 0.0 ? rem
                                 : std::min(opts.cfl * dx / vmax_last, rem);
    // The half-step velocity depends on dt; re-evaluate until the per-cell
    // two-sided CFL condition holds (two-sided keeps upwind positive).
    double vm = 0.0;
    Eigen::ArrayXd vf;
    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      vf = v(faces, t + 0.5 * dt);
      vm = 0.0;
      for (Eigen::Index i = 0; i < rho.size(); ++i) {
        const double s =
            std::max(vf[i + 1], 0.0) - std::min(vf[i], 0.0);
        vm = std::max(vm, s);
      }
      if (vm * dt <= dx * std::min(1.0, 1.05 * opts.cfl)) {
        accepted = true;
        break;
      }
      dt = std::min(opts.cfl * dx / vm, rem);
    }
    if (!accepted)
      throw SolverError("propagate_fv: dt control failed to settle");
    if (diag.steps >= opts.max_steps || (dt < rem && dt < span / opts.max_steps)) {
      std::ostringstream msg;
      msg << "propagate_fv: CFL stall at t=" << t << " s (dt=" << dt
          << ", max|v|=" << vm << "); refine max_steps or the grid";
      throw SolverError(msg.str());
    }

    double fl, fr;
    if (opts.scheme == Scheme::Upwind) {
      const FluxResult f = flux_divergence(rho, vf, dx, opts.scheme);
      rho += dt * f.div;
      fl = f.left;
      fr = f.right;
    } else {  // SSP-RK2 on the MUSCL divergence, velocity frozen at t+dt/2
      const FluxResult f1 = flux_divergence(rho, vf, dx, opts.scheme);
      const Eigen::ArrayXd u1 = rho + dt * f1.div;
      const FluxResult f2 = flux_divergence(u1, vf, dx, opts.scheme);
      rho = 0.5 * rho + 0.5 * (u1 + dt * f2.div);
      fl = 0.5 * (f1.left + f2.left);
      fr = 0.5 * (f1.right + f2.right);
    }
    diag.leakage += dt * (std::abs(fl) + std::abs(fr));
    if (diag.leakage > 1e-6) {
      std::ostringstream msg;
      msg << "propagate_fv: boundary leakage " << diag.leakage
          << " exceeds 1e-6 at t=" << t + dt << " s; widen the grid";
      throw SolverError(msg.str());
    }
    t += dt;
    ++diag.steps;
    diag.min_dt = std::min(diag.min_dt, dt);
    vmax_last = vm;
  }

  const double mass1 = rho.sum() * dx;
  diag.mass_drift = std::abs(mass1 - mass0) / mass0;
  if (diagnostics) *diagnostics = diag;
  return make_density_field(rho0.grid, t_final, std::move(rho));
}

}  // namespace phaseflow
