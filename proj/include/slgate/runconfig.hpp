#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slgate/addressing.hpp"
#include "slgate/mergeopt.hpp"
#include "slgate/species.hpp"
#include "slgate/superlattice.hpp"

namespace slgate {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Addressing-scan section: crosstalk threshold and the (lambda2, A) grid.
struct AddressingBlock {
  bool present = false;
  ThresholdSpec threshold;
  ScanAxis lambda2;  // meters (converted from nm at parse)
  ScanAxis A;
};

// Two-qubit merge section: geometry/solver settings plus sweep driver knobs.
// Transverse confinement may be given as trap frequencies instead of a
// lattice depth; the conversion needs E_r(lambda1) and therefore the species,
// so it is deferred to resolve_transverse().
struct MergeBlock {
  bool present = false;
  MergeConfig cfg;
  SweepSettings sweep;
  std::optional<double> nu_y_hz, nu_z_hz;

  // Folds nu_y/nu_z (if given) into cfg.transverse_depth: the depth whose
  // trap frequency equals the geometric mean sqrt(nu_y*nu_z).
  void resolve_transverse(const Species& sp);
};

// Parsed run configuration, SI units. File units are nm / us / percent as
// documented in the schema (docs in README); values are converted on load.
struct RunConfig {
  int schema_version = 1;
  std::string species_path;
  std::string output_dir = "out";
  long seed = 0;  // reserved for future stochastic features; recorded only
  SuperlatticeConfig lattice;
  std::optional<int> lattice_n;  // set when lambda2 came from a cycle count
  AddressingBlock addressing;
  MergeBlock merge;

  // canonical serialized form of the parsed file and its FNV-1a 64 hash;
  // independent of key order and whitespace in the source file
  std::string canonical;
  std::string config_hash;
};

// Parses and validates a JSON run configuration. Collects every violation
// and reports them all in one ConfigError.
RunConfig load_run_config(const std::string& path);

// Same, from an in-memory JSON string (used by tests and flag overrides).
RunConfig parse_run_config(const std::string& text,
                           const std::string& origin = "<memory>");

}  // namespace slgate
