#pragma once

#include <optional>
#include <vector>

#include "slgate/atomphys.hpp"
#include "slgate/species.hpp"

namespace slgate {

// Two-color superimposed lattice along one axis. The primary beam at lambda1
// is calibrated so the |0> lattice depth equals eta recoil energies
// E_r(lambda1); the secondary beam carries relative intensity A (same
// calibration unit). Both beams share their polarization and contribute
// state-dependent depths through the line-resolved light shift.
struct SuperlatticeConfig {
  double lambda1 = 1064e-9;  // m
  double lambda2 = 851.2e-9; // m, must satisfy lambda2 < lambda1
  double eta = 1.0;          // primary |0> depth in units of E_r(lambda1)
  double A = 0.28;           // secondary / primary intensity ratio
  double polarization = 1.0; // shared beam polarization P
  double phi1 = 0.0;         // primary lattice phase (rad)
  double phi2 = 0.0;         // secondary lattice phase (rad)

  void validate() const;  // throws std::invalid_argument on bad parameters
};

// Half the beat length of the two lattices: the superlattice period.
double slp_length(double lambda1, double lambda2);

// Secondary wavelength such that n secondary cycles match n-1 primary cycles,
// i.e. the superlattice period spans n secondary half-waves exactly.
double wavelength_for_cycles(double lambda1, int n);

// Superlattice potential (J) of `state` at position x (m). Negative (trap).
double potential(const Species& sp, const SuperlatticeConfig& cfg,
                 const QubitState& state, double x);

// One local potential minimum within a superlattice period, resolved per
// qubit state (the two states' minima shift apart when A > 0).
struct Well {
  int index = 0;    // position rank within the period, 0 = leftmost
  double x0 = 0.0;  // |0> minimum position (m)
  double x1 = 0.0;  // |1> minimum position (m)
  double U0 = 0.0;  // |0> potential at x0 (J)
  double U1 = 0.0;  // |1> potential at x1 (J)

  // Differential hyperfine shift between the qubit states in this well (J).
  double dU() const { return U1 - U0; }
};

struct WellScan {
  std::vector<Well> wells;  // empty when the states disagree on well count
  int count0 = 0, count1 = 0;  // per-state minima counts
  // Present when lambda1/lambda2 = (n-1)/n holds for an integer n: the
  // number of secondary cycles per superlattice period.
  std::optional<int> cycles;
};

// Locates all potential minima of both qubit states over one superlattice
// period [-slp_length/2, slp_length/2), by dense sampling (>= 200 points per
// secondary half-wave) plus golden-section refinement to 1e-12*slp_length.
// Marginal shoulder minima may exist for one state only; the per-site
// pairing is then undefined and `wells` is left empty (counts record the
// mismatch) - such configurations cannot address.
WellScan find_wells(const Species& sp, const SuperlatticeConfig& cfg);

// Differential shifts dU per well, ordered by well index.
std::vector<double> differential_shifts(const Species& sp,
                                        const SuperlatticeConfig& cfg);

}  // namespace slgate
