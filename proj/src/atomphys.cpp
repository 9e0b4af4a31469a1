#include "slgate/atomphys.hpp"

#include <cmath>
#include <stdexcept>

#include "slgate/constants.hpp"

namespace slgate {

namespace {

using namespace constants;

struct Detunings {
  double d1, d2;  // omega_laser - omega_line(F), both < 0 when red-detuned
};

Detunings line_detunings(const Species& sp, int F, double wavelength) {
  if (!(wavelength > 0))
    throw std::invalid_argument("beam wavelength must be positive");
  const double omega = two_pi * c_light / wavelength;
  Detunings d{omega - sp.omega_line(1, F), omega - sp.omega_line(2, F)};
  if (d.d1 >= 0 || d.d2 >= 0)
    throw std::invalid_argument(
        "beam must be red-detuned of both D lines (got wavelength " +
        std::to_string(wavelength * 1e9) + " nm)");
  return d;
}

double dipole_prefactor(const Species& sp) {
  return pi * c_light * c_light * sp.gamma /
         (2.0 * sp.omega0 * sp.omega0 * sp.omega0);
}

}  // namespace

double dipole_potential(const Species& sp, const QubitState& state,
                        const BeamSpec& beam) {
  if (beam.intensity < 0)
    throw std::invalid_argument("beam intensity must be non-negative");
  if (std::abs(beam.polarization) > 1.0)
    throw std::invalid_argument("beam polarization must lie in [-1, 1]");
  const auto [d1, d2] = line_detunings(sp, state.F, beam.wavelength);
  const double pg = beam.polarization * state.gF_mF();
  return dipole_prefactor(sp) * beam.intensity *
         ((2.0 + pg) / d2 + (1.0 - pg) / d1);
}

double scattering_rate(const Species& sp, const QubitState& state,
                       const BeamSpec& beam) {
  if (beam.intensity < 0)
    throw std::invalid_argument("beam intensity must be non-negative");
  const auto [d1, d2] = line_detunings(sp, state.F, beam.wavelength);
  return dipole_prefactor(sp) * (sp.gamma / hbar) * beam.intensity *
         (2.0 / (d2 * d2) + 1.0 / (d1 * d1));
}

double recoil_energy(const Species& sp, double wavelength) {
  if (!(wavelength > 0))
    throw std::invalid_argument("wavelength must be positive");
  const double hk = h_planck / wavelength;
  return hk * hk / (2.0 * sp.mass);
}

double scattering_per_depth(const Species& sp, const QubitState& state,
                            double wavelength, double polarization) {
  const BeamSpec unit{wavelength, 1.0, polarization};
  return scattering_rate(sp, state, unit) /
         std::abs(dipole_potential(sp, state, unit));
}

}  // namespace slgate
