// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace y00::phys {

inline constexpr double kPlanck = 6.62607015e-34;     // J s
inline constexpr double kLightSpeed = 299792458.0;     // m/s
inline constexpr double kPi = 3.14159265358979323846;

/// OSNR noise reference bandwidth (0.1 nm at 1550 nm).
inline constexpr double kOsnrReferenceBandwidth = 12.5e9;  // Hz

inline constexpr double kWavelength = 1550.1e-9;  // m
inline constexpr double kSymbolRate = 22e9;       // Bd
inline constexpr double kDacRate = 88e9;          // Sa/s
inline constexpr double kAdcRate = 80e9;          // Sa/s

inline double photon_energy(double wavelength) { return kPlanck * kLightSpeed / wavelength; }

}  // namespace y00::phys
