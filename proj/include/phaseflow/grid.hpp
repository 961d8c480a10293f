#ifndef PHASEFLOW_GRID_HPP
#define PHASEFLOW_GRID_HPP

#include <cmath>
#include <sstream>

#include <Eigen/Core>

#include "phaseflow/errors.hpp"
#include "phaseflow/wavefield.hpp"

namespace phaseflow {

/// Uniform 1D grid. Centers and faces of a symmetric grid (x_min = -x_max)
/// are built by mirroring so that centers[i] == -centers[n-1-i] bitwise;
/// the propagated density then stays mirror-symmetric to rounding.
struct Grid {
  double x_min;
  double x_max;
  int cells;

  double dx() const { return (x_max - x_min) / cells; }
  bool symmetric() const { return x_min == -x_max; }

  Eigen::ArrayXd centers() const {
    Eigen::ArrayXd c(cells);
    const double h = dx();
    if (symmetric()) {
      for (int i = 0; i < cells / 2; ++i) {
        c[i] = x_min + h * (i + 0.5);
        c[cells - 1 - i] = -c[i];
      }
      if (cells % 2 == 1) c[cells / 2] = 0.0;
    } else {
      for (int i = 0; i < cells; ++i) c[i] = x_min + h * (i + 0.5);
    }
    return c;
  }

  Eigen::ArrayXd faces() const {
    Eigen::ArrayXd f(cells + 1);
    const double h = dx();
    if (symmetric()) {
      for (int i = 0; i <= cells / 2; ++i) {
        f[i] = x_min + h * i;
        f[cells - i] = -f[i];
      }
      if (cells % 2 == 0) f[cells / 2] = 0.0;
    } else {
      for (int i = 0; i <= cells; ++i) f[i] = x_min + h * i;
      f[cells] = x_max;
    }
    return f;
  }
};

inline Grid make_grid(double x_min, double x_max, int cells) {
  if (!(x_max > x_min))
    throw ConfigError("grid: x_max must exceed x_min");
  if (cells < 16)
    throw ConfigError("grid: need at least 16 cells");
  return Grid{x_min, x_max, cells};
}

/// Probability density sampled at cell centers, with its quadrature audit.
struct DensityField {
  Grid grid;
  double time = 0.0;
  Eigen::ArrayXd values;
  double mass_audit = 0.0;  // midpoint quadrature at construction
};

/// Midpoint quadrature of the current values (exact for a constant).
inline double total_mass(const DensityField& rho) {
  return rho.values.sum() * rho.grid.dx();
}

inline DensityField make_density_field(const Grid& grid, double time,
                                       Eigen::ArrayXd values) {
  DensityField f{grid, time, std::move(values), 0.0};
  if (f.values.size() != grid.cells)
    throw ConfigError("density: values size does not match grid cells");
  f.mass_audit = total_mass(f);
  return f;
}

/// rho_0 = |psi(x, 0, sigma_rho)|^2 sampled at cell centers.
inline DensityField initial_density(const DoubleSlitWave& wave_rho,
                                    const Grid& grid) {
  Eigen::ArrayXd values = born_density(grid.centers(), 0.0, wave_rho);
  const double peak = values.maxCoeff();
  const double edge = std::max(values[0], values[grid.cells - 1]);
  if (edge >= 1e-12 * peak) {
    // exp(-(|x|-X)^2 / (2 sigma^2)) / 2 < 1e-12 needs |x| > X + 7.35 sigma
    const double need =
        wave_rho.half_separation_X +
        wave_rho.sigma * std::sqrt(-2.0 * std::log(0.5e-12));
    std::ostringstream msg;
    msg << "initial_density: boundary cells carry >= 1e-12 of peak; "
        << "extend the grid to at least |x| = " << need << " m";
    throw ConfigError(msg.str());
  }
  return make_density_field(grid, 0.0, std::move(values));
}

}  // namespace phaseflow

#endif
