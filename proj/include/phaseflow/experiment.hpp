#ifndef PHASEFLOW_EXPERIMENT_HPP
#define PHASEFLOW_EXPERIMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "phaseflow/propagator.hpp"

namespace phaseflow {

/// Full description of one double-slit run. Values are stored in the
/// config-file units (nm/ns/um/kg) exactly as parsed, so the config echo
/// round-trips bit-identically; accessors convert to SI (one multiply by
/// a power of ten).
struct ExperimentConfig {
  double mass_kg = kElectronMass;
  double slit_half_separation_nm = 500.0;
  double sigma_rho_nm = 100.0;
  double sigma_s_nm = 100.0;
  double t_final_ns = 2.0;
  double grid_x_max_um = 10.0;
  int grid_cells = 16384;
  double cfl = 0.5;
  double node_epsilon = 1e-12;
  Scheme scheme = Scheme::UpwindMuscl;
  long max_steps = 200000;

  PhysicalConstants constants() const { return {kHbar, mass_kg}; }
  double half_separation_x() const { return slit_half_separation_nm * 1e-9; }
  double sigma_rho() const { return sigma_rho_nm * 1e-9; }
  double sigma_s() const { return sigma_s_nm * 1e-9; }
  double t_final() const { return t_final_ns * 1e-9; }
  double grid_x_max() const { return grid_x_max_um * 1e-6; }

  Grid grid() const {
    return make_grid(-grid_x_max(), grid_x_max(), grid_cells);
  }
  DoubleSlitWave wave_rho() const {
    return {half_separation_x(), sigma_rho(), constants()};
  }
  DoubleSlitWave wave_s() const {
    return {half_separation_x(), sigma_s(), constants()};
  }
  VelocitySampler sampler() const {
    return {wave_s(), node_epsilon, PacketSelection::Both};
  }
  SolverOptions solver() const {
    return {cfl, scheme, node_epsilon, max_steps};
  }
};

/// Throws ConfigError naming the offending key and constraint.
void validate(const ExperimentConfig& config);

struct RunResult {
  DensityField rho_final;
  DensityField born_reference;  // |psi(x, t_final, sigma_S)|^2
  SolverDiagnostics diagnostics;
  ExperimentConfig config;
};

/// Build rho_0 from sigma_rho, propagate it with the sigma_S velocity
/// field, and evaluate the Born reference on the same grid.
RunResult run_double_slit(const ExperimentConfig& config);

struct SweepEntry {
  double sigma_s_nm = 0.0;
  std::optional<RunResult> result;  // empty on failure
  std::string error;                // failure message, empty on success
};

/// One independent run per sigma_S value (order preserved); individual
/// failures are captured per entry instead of aborting the sweep.
std::vector<SweepEntry> sweep_sigma_s(const ExperimentConfig& base,
                                      const std::vector<double>& sigma_s_nm,
                                      int jobs = 1);

struct Extremum {
  double position = 0.0;  // m, parabolic sub-cell refinement
  double height = 0.0;    // 1/m, cell value at the extremum
};

struct FringeReport {
  std::vector<Extremum> maxima;  // sorted by position
  std::vector<Extremum> minima;
  double central_value = 0.0;        // rho(0)
  bool central_is_minimum = false;   // strict, at the classification offset
  bool central_is_maximum = false;
  double split_depth = 0.0;          // 1 - rho(0)/(nearest flanking max)
  std::optional<double> fringe_spacing_estimate;  // m
};

/// Locate extrema by sign changes of first differences (with parabolic
/// refinement), estimate the fringe spacing as the median spacing of
/// adjacent minima, and quantify the central split at physical offsets
/// h = max(5 dx, 1% of the fringe spacing) so that cell-scale limiter
/// wiggles cannot flip the classification.
FringeReport fringe_analysis(const DensityField& rho);

struct DiscrepancyReport {
  double linf_relative_high_density = 0.0;  // on cells with ref > 1% of peak
  double l2_global = 0.0;                   // ||rho - ref||_2 / ||ref||_2
  Eigen::ArrayXd difference;                // rho - ref, per cell
};

/// Deterministic norms of (rho - reference); grids and times must match.
DiscrepancyReport born_discrepancy(const DensityField& rho,
                                   const DensityField& reference);

}  // namespace phaseflow

#endif
