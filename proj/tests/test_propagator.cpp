#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "phaseflow/propagator.hpp"

using namespace phaseflow;

namespace {

// Unit-free synthetic setups: a Gaussian profile under prescribed flows
// with closed-form solutions.
DensityField gaussian_field(const Grid& grid, double sigma) {
  const Eigen::ArrayXd x = grid.centers();
  Eigen::ArrayXd v =
      (-x.square() / (2.0 * sigma * sigma)).exp() / (sigma * std::sqrt(2.0 * M_PI));
  return make_density_field(grid, 0.0, std::move(v));
}

VelocityField still_flow() {
  return [](const Eigen::ArrayXd& x, double) {
    return Eigen::ArrayXd::Zero(x.size()).eval();
  };
}

VelocityField uniform_flow(double c) {
  return [c](const Eigen::ArrayXd& x, double) {
    return Eigen::ArrayXd::Constant(x.size(), c).eval();
  };
}

// dx/dt = -k x contracts everything toward the origin; the density obeys
// rho(x, t) = e^{kt} rho_0(x e^{kt}).
VelocityField contracting_flow(double k) {
  return [k](const Eigen::ArrayXd& x, double) { return (-k * x).eval(); };
}

double center_of_mass(const DensityField& f) {
  const Eigen::ArrayXd x = f.grid.centers();
  return (f.values * x).sum() / f.values.sum();
}

}  // namespace

TEST_CASE("still flow returns the density bitwise, in one step") {
  const Grid grid = make_grid(-8.0, 8.0, 256);
  const DensityField rho0 = gaussian_field(grid, 0.5);
  for (Scheme scheme : {Scheme::Upwind, Scheme::UpwindMuscl}) {
    SolverOptions opts;
    opts.scheme = scheme;
    SolverDiagnostics diag;
    const DensityField out = propagate_fv(rho0, still_flow(), 3.0, opts, &diag);
    CHECK(diag.steps == 1);
    CHECK(out.time == 3.0);
    CHECK((out.values - rho0.values).abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("equal start and final time is an identity, zero steps") {
  const Grid grid = make_grid(-8.0, 8.0, 256);
  const DensityField rho0 = gaussian_field(grid, 0.5);
  SolverDiagnostics diag;
  const DensityField out =
      propagate_fv(rho0, uniform_flow(1.0), 0.0, SolverOptions{}, &diag);
  CHECK(diag.steps == 0);
  CHECK((out.values - rho0.values).abs().maxCoeff() == 0.0);
}

TEST_CASE("uniform flow advects the center of mass to a cell fraction") {
  const Grid grid = make_grid(-8.0, 8.0, 1024);
  const DensityField rho0 = gaussian_field(grid, 0.5);
  for (Scheme scheme : {Scheme::Upwind, Scheme::UpwindMuscl}) {
    SolverOptions opts;
    opts.scheme = scheme;
    SolverDiagnostics diag;
    const DensityField out =
        propagate_fv(rho0, uniform_flow(1.0), 2.0, opts, &diag);
    CHECK(std::abs(center_of_mass(out) - 2.0) < 0.01 * grid.dx());
    CHECK(diag.mass_drift < 1e-13);
    CHECK(diag.leakage < 1e-12);
    CHECK(diag.min_dt > 0.0);
  }
}

TEST_CASE("contracting flow reproduces the closed-form rescaled density") {
  const Grid grid = make_grid(-8.0, 8.0, 2048);
  const DensityField rho0 = gaussian_field(grid, 1.0);
  const double k = 0.25, T = 2.0, s = std::exp(k * T);
  const Eigen::ArrayXd x = grid.centers();
  const Eigen::ArrayXd exact =
      s * (-(x * s).square() / 2.0).exp() / std::sqrt(2.0 * M_PI);

  SolverDiagnostics diag;
  const DensityField fv =
      propagate_fv(rho0, contracting_flow(k), T, SolverOptions{}, &diag);
  CHECK((fv.values - exact).abs().maxCoeff() < 0.02 * exact.maxCoeff());
  CHECK(diag.mass_drift < 1e-13);

  const DensityField ch =
      propagate_characteristics(rho0, contracting_flow(k), T, 4096);
  double worst = 0.0;
  const double cut = 1e-3 * exact.maxCoeff();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (exact[i] > cut)
      worst = std::max(worst, std::abs(ch.values[i] - exact[i]) / exact[i]);
  CHECK(worst < 1e-3);
}

TEST_CASE("upwind stays nonnegative and MUSCL undershoots only at rounding") {
  const DoubleSlitWave wave{500e-9, 100e-9, {}};
  const VelocityField field =
      make_velocity_field(VelocitySampler{wave, 1e-12, PacketSelection::Both});
  const Grid grid = make_grid(-10e-6, 10e-6, 1024);
  const DensityField rho0 =
      make_density_field(grid, 0.0, born_density(grid.centers(), 0.0, wave));
  const double peak = rho0.values.maxCoeff();

  SolverOptions opts;
  opts.scheme = Scheme::Upwind;
  CHECK(propagate_fv(rho0, field, 0.3e-9, opts).values.minCoeff() >= 0.0);
  opts.scheme = Scheme::UpwindMuscl;
  CHECK(propagate_fv(rho0, field, 0.3e-9, opts).values.minCoeff() >=
        -1e-15 * peak);
}

TEST_CASE("departing mass aborts the run with a widen-the-grid hint") {
  const Grid grid = make_grid(-8.0, 8.0, 512);
  const DensityField rho0 = gaussian_field(grid, 0.5);
  CHECK_THROWS_WITH_AS(
      propagate_fv(rho0, uniform_flow(1.0), 20.0, SolverOptions{}),
      doctest::Contains("widen the grid"), SolverError);
}

TEST_CASE("step budget exhaustion is a CFL stall, not silent truncation") {
  const Grid grid = make_grid(-8.0, 8.0, 512);
  const DensityField rho0 = gaussian_field(grid, 0.5);
  SolverOptions opts;
  opts.max_steps = 3;
  CHECK_THROWS_WITH_AS(
      propagate_fv(rho0, contracting_flow(0.25), 2.0, opts),
      doctest::Contains("CFL stall"), SolverError);
}

TEST_CASE("solver options are validated") {
  const Grid grid = make_grid(-8.0, 8.0, 256);
  const DensityField rho0 = gaussian_field(grid, 0.5);
  SolverOptions opts;
  opts.cfl = 0.0;
  CHECK_THROWS_AS(propagate_fv(rho0, still_flow(), 1.0, opts), ConfigError);
  opts.cfl = 1.5;
  CHECK_THROWS_AS(propagate_fv(rho0, still_flow(), 1.0, opts), ConfigError);
  opts = SolverOptions{};
  opts.max_steps = 0;
  CHECK_THROWS_AS(propagate_fv(rho0, still_flow(), 1.0, opts), ConfigError);
  CHECK_THROWS_AS(propagate_fv(rho0, still_flow(), -1.0, SolverOptions{}),
                  ConfigError);
}

TEST_CASE("collapsing trajectories raise a located crossing error") {
  // Everything right of x = 1 marches left at unit speed and freezes just
  // past the edge, so dozens of trajectories pile onto one point and the
  // spacing Jacobian degenerates.
  const Grid grid = make_grid(-8.0, 8.0, 64);
  const DensityField rho0 = gaussian_field(grid, 2.0);
  const VelocityField pile = [](const Eigen::ArrayXd& x, double) {
    return (x > 1.0).select(Eigen::ArrayXd::Constant(x.size(), -1.0),
                            Eigen::ArrayXd::Zero(x.size()))
        .eval();
  };
  CHECK_THROWS_WITH_AS(propagate_characteristics(rho0, pile, 8.0, 128),
                       doctest::Contains("crossing"), SolverError);
}

TEST_CASE("characteristics validate their inputs") {
  const Grid grid = make_grid(-1.0, 1.0, 64);
  const DensityField rho0 = gaussian_field(grid, 0.3);
  CHECK_THROWS_AS(propagate_characteristics(rho0, still_flow(), 1.0, 32),
                  ConfigError);  // fewer trajectories than cells
  CHECK_THROWS_AS(propagate_characteristics(rho0, still_flow(), 1.0, 128, 0.0),
                  ConfigError);
  CHECK_THROWS_AS(propagate_characteristics(rho0, still_flow(), 1.0, 128, 1.0),
                  ConfigError);
  CHECK_THROWS_AS(propagate_characteristics(rho0, still_flow(), -1.0, 128),
                  ConfigError);
  const DensityField empty =
      make_density_field(grid, 0.0, Eigen::ArrayXd::Zero(64));
  CHECK_THROWS_WITH_AS(propagate_characteristics(empty, still_flow(), 1.0, 128),
                       doctest::Contains("support"), ConfigError);
}

TEST_CASE("characteristics at the start time return the density unchanged") {
  const Grid grid = make_grid(-1.0, 1.0, 64);
  const DensityField rho0 = gaussian_field(grid, 0.3);
  const DensityField out =
      propagate_characteristics(rho0, still_flow(), 0.0, 128);
  CHECK((out.values - rho0.values).abs().maxCoeff() == 0.0);
}

TEST_CASE("series order zero is the initial density") {
  const Grid grid = make_grid(-8.0, 8.0, 256);
  const DensityField rho0 = gaussian_field(grid, 1.0);
  const SeriesResult r = propagate_series(rho0, contracting_flow(0.25), 0.1, 0, 16);
  CHECK(r.term_norms.empty());
  CHECK_FALSE(r.diverged);
  CHECK((r.density.values - rho0.values).abs().maxCoeff() == 0.0);
}

TEST_CASE("series tracks the solver at short horizons") {
  const Grid grid = make_grid(-8.0, 8.0, 2048);
  const DensityField rho0 = gaussian_field(grid, 1.0);
  const VelocityField flow = contracting_flow(0.25);
  const double T = 0.04;  // kT = 0.01
  const DensityField fv = propagate_fv(rho0, flow, T, SolverOptions{});
  const SeriesResult sr = propagate_series(rho0, flow, T, 3, 32);
  CHECK(sr.term_norms.size() == 3);
  CHECK_FALSE(sr.diverged);
  const double l2 = std::sqrt((sr.density.values - fv.values).square().sum() /
                              fv.values.square().sum());
  CHECK(l2 < 1e-3);
}

TEST_CASE("series flags divergence at long horizons instead of summing junk") {
  const Grid grid = make_grid(-8.0, 8.0, 512);
  const DensityField rho0 = gaussian_field(grid, 1.0);
  const SeriesResult sr =
      propagate_series(rho0, contracting_flow(0.25), 20.0, 3, 64);
  CHECK(sr.diverged);
}

TEST_CASE("series validates order and quadrature") {
  const Grid grid = make_grid(-8.0, 8.0, 256);
  const DensityField rho0 = gaussian_field(grid, 1.0);
  CHECK_THROWS_AS(propagate_series(rho0, still_flow(), 1.0, -1, 16),
                  ConfigError);
  CHECK_THROWS_AS(propagate_series(rho0, still_flow(), 1.0, 2, 0),
                  ConfigError);
}

TEST_CASE("grids below the minimum resolution are rejected") {
  CHECK_THROWS_AS(make_grid(-1.0, 1.0, 8), ConfigError);
  CHECK_THROWS_AS(make_grid(1.0, -1.0, 64), ConfigError);
  CHECK_THROWS_AS(
      make_density_field(make_grid(-1.0, 1.0, 64), 0.0, Eigen::ArrayXd::Zero(32)),
      ConfigError);
}
