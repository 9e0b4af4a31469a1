#pragma once

// CODATA 2018 values, SI units throughout.
namespace slgate::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double c_light = 299792458.0;          // m/s
inline constexpr double h_planck = 6.62607015e-34;      // J s
inline constexpr double hbar = h_planck / two_pi;       // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double bohr_radius = 5.29177210903e-11;       // m

}  // namespace slgate::constants
