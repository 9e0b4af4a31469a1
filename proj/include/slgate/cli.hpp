#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "slgate/runconfig.hpp"

namespace slgate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;   // config/species/usage faults
inline constexpr int kExitNumeric = 3;  // runtime numerical failure

// Applies dotted-path overrides ("merge.tau_us=[250,270]", "superlattice.A=
// 0.3") onto the raw config JSON; values parse as JSON with string fallback.
// Flags always win over file values.
std::string apply_overrides(const std::string& config_text,
                            const std::vector<std::string>& sets);

// Dry run: echoes derived quantities (a_SLP, cycle count, recoil energies,
// g_1D, config hash). The heavy validation happened at parse.
int cmd_validate(const RunConfig& rc, std::ostream& out);

// (lambda2, A) addressing scan -> scan.csv + scan_summary.json.
int cmd_scan(const RunConfig& rc, std::ostream& out);

// Merge-pulse optimization over the configured durations -> per-duration
// pulse files + gate reports, sweep.csv, sweep_summary.json.
int cmd_merge(const RunConfig& rc, std::ostream& out);

// Re-evaluates a stored pulse under the config (no optimization) -> gate
// report; used for reproducibility checks.
int cmd_replay(const RunConfig& rc, const std::string& pulse_path,
               std::ostream& out);

// Full front end: load config, apply overrides, dispatch to one of the
// commands above. Failures print a machine-readable error JSON to `err`
// (and to <output_dir>/error.json when the output dir is known) and map to
// the exit codes above.
int dispatch(const std::string& command, const std::string& config_path,
             const std::vector<std::string>& sets,
             const std::string& pulse_path, std::ostream& out,
             std::ostream& err);

}  // namespace slgate::cli
