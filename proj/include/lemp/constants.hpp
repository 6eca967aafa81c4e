#pragma once

#include <numbers>

namespace lemp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kC0 = 299792458.0;            // speed of light in vacuum [m/s]
inline constexpr double kMu0 = 1.25663706212e-6;      // vacuum permeability [H/m]
inline constexpr double kEps0 = 8.8541878128e-12;     // vacuum permittivity [F/m]
inline constexpr double kEta0 = kMu0 * kC0;           // free-space impedance [Ohm]

}  // namespace lemp
