#ifndef PHASEFLOW_OUTPUT_HPP
#define PHASEFLOW_OUTPUT_HPP

#include <string>
#include <vector>

#include "phaseflow/experiment.hpp"

namespace phaseflow {

/// Write one run into `dir` (created if missing):
///   data.csv         x_m, rho, born_reference, velocity_at_t_final
///   fringes.csv      kind, position_m, height
///   metadata.json    version, config echo, grid, diagnostics, fringe and
///                    discrepancy summaries
///   config_echo.cfg  canonical round-trippable config
/// Numbers carry 17 significant digits. Returns the paths written.
std::vector<std::string> write_run_bundle(const std::string& dir,
                                          const RunResult& run);

/// Write summary.csv over all entries (one row per sigma_S, failures kept
/// with their message) plus a full run bundle per successful entry in
/// sigma_s_<value>nm/ subdirectories. Returns the summary path.
std::string write_sweep_bundle(const std::string& dir,
                               const std::vector<SweepEntry>& entries);

}  // namespace phaseflow

#endif
