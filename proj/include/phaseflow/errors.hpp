#ifndef PHASEFLOW_ERRORS_HPP
#define PHASEFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace phaseflow {

/// Invalid configuration or input data (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Propagation failure: CFL stall, leakage, node blowup, trajectory
/// crossing (CLI exit code 3).
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace phaseflow

#endif
