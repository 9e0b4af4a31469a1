#pragma once

#include <functional>
#include <vector>

#include "slgate/grid.hpp"

namespace slgate {

// Fills v (size grid.npoints) with the potential at time t. Units are the
// caller's; dynamics routines only require hbar/mass expressed consistently.
using PotentialFill = std::function<void(double t, std::vector<double>& v)>;

// Observation hook: called with the current time and the full batch.
using RecordSink =
    std::function<void(double t, const std::vector<Wavefunction>&)>;

struct PropagationSettings {
  double hbar = 1.0;
  double mass = 1.0;
  double t0 = 0.0;
  double dt = 0.0;
  int steps = 0;
  // records fire at t0, then every record_stride steps, and after the final
  // step; 0 disables intermediate records (only t0 and the end fire).
  int record_stride = 0;

  void validate() const;
};

// Second-order (Strang) split-step propagation of a batch of wavefunctions
// sharing one grid and one time-dependent potential. The potential is sampled
// at the midpoint of each half-step (t + dt/4 and t + 3dt/4), which preserves
// second-order accuracy for time-dependent Hamiltonians. Unitary: the norm of
// every batch member is conserved to rounding.
void split_step(std::vector<Wavefunction>& batch, const PotentialFill& vfill,
                const PropagationSettings& s, const RecordSink& on_record = {});

struct EigenStates {
  std::vector<double> energies;      // ascending
  std::vector<Wavefunction> states;  // real, unit norm, zero outside window
};

// Lowest `count` eigenstates of -hbar^2/(2m) d^2/dx^2 + v(x) restricted to
// the window [center - halfwidth, center + halfwidth] with Dirichlet walls.
// The window may wrap across the periodic boundary; states are embedded into
// the full grid. Tridiagonal finite differences, LAPACK-backed.
EigenStates window_eigenstates(const Grid& g, const std::vector<double>& v,
                               double center, double halfwidth, int count,
                               double hbar, double mass);

// Transverse confinement defining the effective 1D interaction strength
// g1d = 2 a_s h sqrt(nu_y nu_z) for harmonic frequencies nu_y, nu_z (Hz).
struct InteractionSpec {
  double scattering_length = 0.0;  // m
  double nu_y = 0.0, nu_z = 0.0;   // Hz

  double g1d() const;  // J m
};

// Mean-field interaction energy 2 g1d * integral |a|^2 |b|^2 dx of two
// distinguishable particles in states a and b.
double interaction_energy(double g1d, const Wavefunction& a,
                          const Wavefunction& b);

// Phase integral of a sampled interaction-energy record: trapezoid of
// u(t)/hbar over t. Requires at least two samples, strictly increasing t.
double accumulated_phase(const std::vector<double>& t,
                         const std::vector<double>& u, double hbar);

}  // namespace slgate
