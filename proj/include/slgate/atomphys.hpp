#pragma once

#include "slgate/species.hpp"

namespace slgate {

// One far-detuned trapping beam. Polarization P in [-1, 1] (0 = linear,
// +/-1 = pure circular); intensity in W/m^2.
struct BeamSpec {
  double wavelength = 0.0;
  double intensity = 0.0;
  double polarization = 0.0;
};

// Optical dipole potential (J) of `state` at the intensity maximum of `beam`.
// Line-resolved two-level sum over D1/D2 with the vector light-shift term
// proportional to P*gF*mF. Negative for red detuning. Throws
// std::invalid_argument unless the beam is red-detuned of both D lines for
// the state's ground manifold.
double dipole_potential(const Species& sp, const QubitState& state,
                        const BeamSpec& beam);

// Off-resonant photon scattering rate (1/s) for `state` in `beam`, same
// line-resolved detunings as dipole_potential.
double scattering_rate(const Species& sp, const QubitState& state,
                       const BeamSpec& beam);

// Photon recoil energy (J) at the given wavelength.
double recoil_energy(const Species& sp, double wavelength);

// Scattering-to-depth quotient (s^-1 per J of trap depth) for `state` in a
// beam at `wavelength`: scattering_rate / |dipole_potential|, independent of
// intensity.
double scattering_per_depth(const Species& sp, const QubitState& state,
                            double wavelength, double polarization);

}  // namespace slgate
