#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "phaseflow/config_io.hpp"
#include "phaseflow/experiment.hpp"

using namespace phaseflow;

TEST_CASE("config validation names the offending constraint") {
  ExperimentConfig c;
  c.sigma_s_nm = 99.0;  // guiding wave narrower than the density
  CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("sigma_s_nm"),
                       ConfigError);
  c = {};
  c.grid_cells = 8;
  CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("grid_cells"),
                       ConfigError);
  c = {};
  c.cfl = 1.5;
  CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("cfl"), ConfigError);
  c = {};
  c.node_epsilon = 0.0;
  CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("node_epsilon"),
                       ConfigError);
  c = {};
  c.t_final_ns = -1.0;
  CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("t_final_ns"),
                       ConfigError);
  CHECK_NOTHROW(validate(ExperimentConfig{}));
}

TEST_CASE("accessors convert the stored boundary units to SI") {
  ExperimentConfig c;
  c.slit_half_separation_nm = 500.0;
  c.sigma_rho_nm = 100.0;
  c.t_final_ns = 2.0;
  c.grid_x_max_um = 10.0;
  CHECK(c.half_separation_x() == doctest::Approx(500e-9).epsilon(1e-15));
  CHECK(c.sigma_rho() == doctest::Approx(100e-9).epsilon(1e-15));
  CHECK(c.t_final() == doctest::Approx(2e-9).epsilon(1e-15));
  CHECK(c.grid_x_max() == doctest::Approx(10e-6).epsilon(1e-15));
}

TEST_CASE("too narrow a grid is rejected with the required extent") {
  ExperimentConfig c;
  c.grid_x_max_um = 1.0;  // slits at 0.5 um need roughly |x| > 1.24 um
  c.grid_cells = 1024;
  CHECK_THROWS_WITH_AS(run_double_slit(c), doctest::Contains("extend the grid"),
                       ConfigError);
}

TEST_CASE("a short default-geometry run conserves mass and reports steps") {
  ExperimentConfig c;
  c.grid_cells = 2048;
  c.t_final_ns = 0.1;
  const RunResult run = run_double_slit(c);
  CHECK(run.diagnostics.steps > 0);
  CHECK(run.diagnostics.mass_drift < 1e-12);
  CHECK(run.rho_final.time == c.t_final());
  CHECK(run.born_reference.time == c.t_final());
  // At equal widths and short times the transported density stays close
  // to the Born reference.
  const DiscrepancyReport d =
      born_discrepancy(run.rho_final, run.born_reference);
  CHECK(d.linf_relative_high_density < 0.02);
}

TEST_CASE("fringe analysis of an analytic interference pattern") {
  // The exact |psi|^2 at 2 ns: clean fringes, no solver artifacts.
  const DoubleSlitWave wave{500e-9, 100e-9, {}};
  const Grid grid = make_grid(-10e-6, 10e-6, 8192);
  const double t = 2e-9;
  const DensityField rho =
      make_density_field(grid, t, born_density(grid.centers(), t, wave));
  const FringeReport fr = fringe_analysis(rho);

  REQUIRE(fr.maxima.size() >= 3);
  REQUIRE(fr.minima.size() >= 2);
  CHECK(fr.central_is_maximum);
  CHECK_FALSE(fr.central_is_minimum);
  CHECK(fr.split_depth == 0.0);

  // The central fringe peaks exactly between the two middle cells.
  double best = 1.0;
  for (const Extremum& m : fr.maxima)
    best = std::min(best, std::abs(m.position));
  CHECK(best < 1e-12);

  REQUIRE(fr.fringe_spacing_estimate.has_value());
  const double g = gamma(t, wave.sigma, wave.constants);
  const double expected = 2.0 * M_PI * wave.sigma * wave.sigma * (1.0 + g * g) /
                          (wave.half_separation_X * g);
  CHECK(std::abs(*fr.fringe_spacing_estimate - expected) / expected < 0.05);

  // Mirror pairs land at mirrored refined positions.
  const auto& mx = fr.maxima;
  for (size_t i = 0; i < mx.size() / 2; ++i) {
    CHECK(mx[i].position == -mx[mx.size() - 1 - i].position);
    CHECK(mx[i].height == mx[mx.size() - 1 - i].height);
  }
}

TEST_CASE("fringe analysis of a synthetic split profile") {
  // Two humps exp(-(|x|-b)^2 / (2 c^2)): a strict central dip of known depth.
  const Grid grid = make_grid(-10.0, 10.0, 4096);
  const Eigen::ArrayXd x = grid.centers();
  const double b = 2.0, c = 1.5;
  const Eigen::ArrayXd values = (-(x.abs() - b).square() / (2.0 * c * c)).exp();
  const DensityField rho = make_density_field(grid, 0.0, values);
  const FringeReport fr = fringe_analysis(rho);

  CHECK(fr.central_is_minimum);
  CHECK_FALSE(fr.central_is_maximum);
  const double expected_depth = 1.0 - std::exp(-b * b / (2.0 * c * c));
  CHECK(std::abs(fr.split_depth - expected_depth) < 1e-3);
  CHECK_FALSE(fr.fringe_spacing_estimate.has_value());  // only two maxima
}

TEST_CASE("discrepancy norms on constructed fields") {
  const Grid grid = make_grid(-1.0, 1.0, 64);
  const DensityField ref =
      make_density_field(grid, 1.0, Eigen::ArrayXd::Constant(64, 2.0));
  const DensityField same = make_density_field(grid, 1.0, ref.values);
  const DiscrepancyReport zero = born_discrepancy(same, ref);
  CHECK(zero.linf_relative_high_density == 0.0);
  CHECK(zero.l2_global == 0.0);

  Eigen::ArrayXd shifted = ref.values + 0.02;
  const DiscrepancyReport off =
      born_discrepancy(make_density_field(grid, 1.0, shifted), ref);
  CHECK(off.linf_relative_high_density == doctest::Approx(0.01));
  CHECK(off.l2_global == doctest::Approx(0.01));
  CHECK(off.difference.size() == 64);
  CHECK(off.difference.abs().maxCoeff() == doctest::Approx(0.02));
}

TEST_CASE("discrepancy rejects mismatched grids and times") {
  const Grid a = make_grid(-1.0, 1.0, 64);
  const Grid b = make_grid(-1.0, 1.0, 128);
  const DensityField fa =
      make_density_field(a, 1.0, Eigen::ArrayXd::Constant(64, 1.0));
  const DensityField fb =
      make_density_field(b, 1.0, Eigen::ArrayXd::Constant(128, 1.0));
  CHECK_THROWS_AS(born_discrepancy(fa, fb), ConfigError);
  const DensityField late =
      make_density_field(a, 2.0, Eigen::ArrayXd::Constant(64, 1.0));
  CHECK_THROWS_AS(born_discrepancy(fa, late), ConfigError);
}

TEST_CASE("sweep preserves order and captures per-value failures") {
  ExperimentConfig base;
  base.grid_cells = 512;
  base.grid_x_max_um = 2.0;
  base.t_final_ns = 0.05;
  const std::vector<double> widths{100.0, 99.0, 101.0};
  const auto entries = sweep_sigma_s(base, widths, 2);
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].sigma_s_nm == 100.0);
  CHECK(entries[0].result.has_value());
  CHECK(entries[0].error.empty());
  CHECK_FALSE(entries[1].result.has_value());
  CHECK(entries[1].error.find("sigma_s_nm") != std::string::npos);
  CHECK(entries[2].result.has_value());
}

TEST_CASE("sweep validates its inputs") {
  CHECK_THROWS_AS(sweep_sigma_s(ExperimentConfig{}, {}, 1), ConfigError);
  CHECK_THROWS_AS(sweep_sigma_s(ExperimentConfig{}, {100.0}, 0), ConfigError);
}

TEST_CASE("config echo round-trips bit for bit") {
  ExperimentConfig c;
  c.mass_kg = 9.1093837015e-31;
  c.sigma_s_nm = 100.4999999999998;  // exercise all 17 digits
  c.t_final_ns = 1.9999999999999998;
  c.cfl = 0.3333333333333333;
  c.node_epsilon = 1.2345678901234567e-11;
  c.grid_cells = 12345;
  c.max_steps = 54321;
  c.scheme = Scheme::Upwind;
  std::istringstream echo(format_config(c));
  const ParsedConfig back = parse_config(echo);
  CHECK(back.defaulted_keys.empty());
  CHECK(back.config.mass_kg == c.mass_kg);
  CHECK(back.config.slit_half_separation_nm == c.slit_half_separation_nm);
  CHECK(back.config.sigma_rho_nm == c.sigma_rho_nm);
  CHECK(back.config.sigma_s_nm == c.sigma_s_nm);
  CHECK(back.config.t_final_ns == c.t_final_ns);
  CHECK(back.config.grid_x_max_um == c.grid_x_max_um);
  CHECK(back.config.grid_cells == c.grid_cells);
  CHECK(back.config.cfl == c.cfl);
  CHECK(back.config.node_epsilon == c.node_epsilon);
  CHECK(back.config.scheme == c.scheme);
  CHECK(back.config.max_steps == c.max_steps);
}

TEST_CASE("parser reports unknown keys, duplicates, and bad numbers") {
  std::istringstream unknown("sigma_s_nm = 100\nwidth_nm = 3\n");
  CHECK_THROWS_WITH_AS(parse_config(unknown),
                       doctest::Contains("unknown key 'width_nm'"),
                       ConfigError);
  std::istringstream dup("cfl = 0.5\ncfl = 0.4\n");
  CHECK_THROWS_WITH_AS(parse_config(dup), doctest::Contains("duplicate"),
                       ConfigError);
  std::istringstream junk("cfl = 0.5x\n");
  CHECK_THROWS_WITH_AS(parse_config(junk), doctest::Contains("line 1"),
                       ConfigError);
  std::istringstream frac_cells("grid_cells = 16384.5\n");
  CHECK_THROWS_AS(parse_config(frac_cells), ConfigError);
  std::istringstream noeq("cfl 0.5\n");
  CHECK_THROWS_AS(parse_config(noeq), ConfigError);
  std::istringstream invalid("sigma_s_nm = 50\n");  // < sigma_rho default
  CHECK_THROWS_AS(parse_config(invalid), ConfigError);
}

TEST_CASE("parser skips comments and reports defaulted keys") {
  std::istringstream in(
      "# reference geometry\n"
      "\n"
      "  sigma_s_nm = 101.5  \n"
      "scheme = UPWIND-MUSCL\n");
  const ParsedConfig p = parse_config(in);
  CHECK(p.config.sigma_s_nm == 101.5);
  CHECK(p.config.scheme == Scheme::UpwindMuscl);
  CHECK(p.defaulted_keys.size() == 9);  // 11 keys, 2 given
}

TEST_CASE("scheme tokens are validated") {
  CHECK(parse_scheme("upwind") == Scheme::Upwind);
  CHECK(parse_scheme("  Upwind-MUSCL ") == Scheme::UpwindMuscl);
  CHECK_THROWS_AS(parse_scheme("muscl"), ConfigError);
  CHECK(std::string(scheme_name(Scheme::Upwind)) == "upwind");
  CHECK(std::string(scheme_name(Scheme::UpwindMuscl)) == "upwind-muscl");
}
