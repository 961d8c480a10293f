#ifndef PHASEFLOW_CONSTANTS_HPP
#define PHASEFLOW_CONSTANTS_HPP

namespace phaseflow {

inline constexpr const char* kVersion = "0.1.0";

/// CODATA 2018 values; everything internal is SI.
inline constexpr double kHbar = 1.054571817e-34;        // J s
inline constexpr double kElectronMass = 9.1093837015e-31; // kg

struct PhysicalConstants {
  double hbar = kHbar;
  double mass = kElectronMass;
};

}  // namespace phaseflow

#endif
