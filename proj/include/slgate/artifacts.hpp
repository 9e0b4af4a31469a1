#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "slgate/addressing.hpp"
#include "slgate/mergeopt.hpp"

namespace slgate::io {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 17 significant digits: lossless decimal round-trip for IEEE doubles.
std::string format17(double v);
double parse17(const std::string& s);

// FNV-1a 64-bit over raw bytes; rendered as "fnv64:<16 hex digits>".
std::uint64_t fnv1a64(const std::string& data);
std::string hash_hex(std::uint64_t h);

// ---------------------------------------------------------------- scan ----

struct ScanRow {
  double lambda2_nm = 0.0;
  double A = 0.0;
  double detuning_over_etaEr = 0.0;
  double gate_time_s_at_eta = 0.0;
  double success_probability = 0.0;
};

extern const char kScanCsvHeader[];

// CSV with a "# config_hash ..." comment line, the fixed header, then one
// row per cell (row-major: lambda2 outer, A inner).
void write_scan_csv(const std::string& path, const std::vector<ScanRow>& rows,
                    const std::string& config_hash);
std::vector<ScanRow> read_scan_csv(const std::string& path,
                                   std::string* config_hash = nullptr);

// JSON sidecar: schema version, config hash, axes, argmax cell by success.
void write_scan_summary(const std::string& path,
                        const std::vector<ScanRow>& rows,
                        const std::string& config_hash);

// --------------------------------------------------------------- sweep ----

struct SweepRow {
  double tau_us = 0.0;
  double f_target = 0.0;
  double f_all = 0.0;
  double f_error = 0.0;
  double t_swap_us = 0.0;
  double t_sqrtswap_us = 0.0;
  double p_sc_swap = 0.0;
  double p_sc_sqrtswap = 0.0;
};

extern const char kSweepCsvHeader[];

SweepRow sweep_row(const SweepPoint& p);
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows,
                     const std::string& config_hash);
std::vector<SweepRow> read_sweep_csv(const std::string& path,
                                     std::string* config_hash = nullptr);
void write_sweep_summary(const std::string& path,
                         const std::vector<SweepRow>& rows,
                         const std::string& config_hash);

// --------------------------------------------------------------- pulse ----

struct PulseFile {
  int version = 1;
  std::string config_hash;
  std::string interpolation = "pchip";
  double tau = 0.0;  // seconds
  ControlPulse pulse;
};

// Structured text: versioned header comments then one "t A1 phi" knot row
// per line, all values at 17 significant digits.
void write_pulse(const std::string& path, const ControlPulse& pulse,
                 const std::string& config_hash);
PulseFile read_pulse(const std::string& path);

// --------------------------------------------------------------- report ----

std::string gate_report_json(const GateReport& r,
                             const std::string& config_hash);
void write_gate_report(const std::string& path, const GateReport& r,
                       const std::string& config_hash);

// Machine-readable failure artifact {schema_version, error: {kind, message}}.
std::string error_json(const std::string& kind, const std::string& message);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace slgate::io
