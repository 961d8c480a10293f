#include <cmath>
#include <sstream>

#include "phaseflow/ode45.hpp"
#include "phaseflow/pchip.hpp"
#include "phaseflow/propagator.hpp"

namespace phaseflow {

DensityField propagate_characteristics(const DensityField& rho0,
                                       const VelocityField& v, double t_final,
                                       int n_traj, double support_floor) {
  if (n_traj < rho0.grid.cells)
    throw ConfigError("characteristics: n_traj must be >= grid cells");
  if (!(support_floor > 0.0) || support_floor >= 1.0)
    throw ConfigError("characteristics: support_floor must lie in (0, 1)");
  if (!(t_final >= rho0.time))
    throw ConfigError("characteristics: t_final must not precede field time");
  if (t_final == rho0.time) return rho0;

  const Eigen::ArrayXd centers = rho0.grid.centers();
  const double peak = rho0.values.maxCoeff();
  if (!(peak > 0.0))
    throw ConfigError("characteristics: density has no support");

  // Seed only where rho_0 carries mass. Outside the support floor the node
  // regularization caps v, and the (zero-mass) trajectories there pile up
  // against fringe minima instead of following the flow.
  Eigen::Index ilo = 0, ihi = rho0.grid.cells - 1;
  while (rho0.values[ilo] < support_floor * peak) ++ilo;
  while (rho0.values[ihi] < support_floor * peak) --ihi;
  const Eigen::Index support = ihi - ilo + 1;
  const Eigen::Index refine = (n_traj + support - 1) / support;
  const Eigen::Index count = support * refine;

  const double a = centers[ilo], b = centers[ihi];
  Eigen::ArrayXd seeds(count);
  if (b == -a) {  // keep seeds mirror-exact on symmetric grids
    for (Eigen::Index i = 0; i < count / 2; ++i) {
      seeds[i] = a + (b - a) * (static_cast<double>(i) / (count - 1));
      seeds[count - 1 - i] = -seeds[i];
    }
    if (count % 2 == 1) seeds[count / 2] = 0.0;
  } else {
    for (Eigen::Index i = 0; i < count; ++i)
      seeds[i] = a + (b - a) * (static_cast<double>(i) / (count - 1));
    seeds[count - 1] = b;
  }
  const Pchip rho0_interp(centers, rho0.values);
  const Eigen::ArrayXd rho_seed = rho0_interp(seeds);

  const Eigen::ArrayXd xf =
      integrate_dp45(v, seeds, rho0.time, t_final, 1e-8, 1e-13);

  for (Eigen::Index i = 0; i + 1 < count; ++i) {
    if (!(xf[i + 1] - xf[i] > 0.0)) {
      std::ostringstream msg;
      msg << "characteristics: trajectory crossing (J <= 0) near x="
          << xf[i] << " m at t=" << t_final << " s (seeds " << seeds[i]
          << ", " << seeds[i + 1]
          << " m); velocity field or tolerances are defective";
      throw SolverError(msg.str());
    }
  }

  // rho_0(x_0) / J at pair midpoints, J = spacing ratio; resample the log
  // so steep fringe walls keep their relative accuracy.
  Eigen::ArrayXd xm(count - 1), logr(count - 1);
  for (Eigen::Index i = 0; i + 1 < count; ++i) {
    xm[i] = 0.5 * (xf[i] + xf[i + 1]);
    const double j = (xf[i + 1] - xf[i]) / (seeds[i + 1] - seeds[i]);
    logr[i] = std::log(0.5 * (rho_seed[i] + rho_seed[i + 1]) / j);
  }
  const Pchip recon(xm, logr);
  Eigen::ArrayXd out(rho0.grid.cells);
  for (Eigen::Index i = 0; i < rho0.grid.cells; ++i) {
    const double y = recon(centers[i]);
    out[i] = std::isnan(y) ? 0.0 : std::exp(y);
  }
  return make_density_field(rho0.grid, t_final, std::move(out));
}

}  // namespace phaseflow
