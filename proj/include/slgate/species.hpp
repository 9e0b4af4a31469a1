#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace slgate {

// One hyperfine ground-state Zeeman level used as a qubit state.
struct QubitState {
  int F = 0;
  int mF = 0;
  double gF = 0.0;

  double gF_mF() const { return gF * static_cast<double>(mF); }
};

// Alkali atom with two D lines resolved per ground hyperfine manifold.
// All frequencies are angular (rad/s); mass kg; lengths m.
struct Species {
  std::string name;
  double mass = 0.0;
  double omega0 = 0.0;  // reference transition frequency for the dipole prefactor
  double gamma = 0.0;   // natural linewidth
  std::map<int, double> omega_D1_F;  // keyed by ground-state F
  std::map<int, double> omega_D2_F;
  std::map<int, double> gF;  // Lande factor per ground-state F
  double scattering_length = 0.0;
  double hfs_ground_split = 0.0;

  // Transition frequency for line 1 (D1) or 2 (D2) from ground manifold F.
  double omega_line(int line, int F) const;

  // Qubit encoding: |0> = |F=1, mF=1>, |1> = |F=2, mF=2>.
  QubitState state0() const { return {1, 1, gF.at(1)}; }
  QubitState state1() const { return {2, 2, gF.at(2)}; }
};

struct SpeciesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses a species JSON file. Throws SpeciesError listing every missing or
// invalid field; validates internal consistency (line ordering, hyperfine
// splitting between the per-F transition frequencies).
Species load_species(const std::string& path);

// Convenience: bundled rubidium-87 data file.
std::string default_species_path();

}  // namespace slgate
