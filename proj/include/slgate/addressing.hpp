#pragma once

#include <vector>

#include "slgate/superlattice.hpp"

namespace slgate {

// Crosstalk threshold for site-selective driving: neighbouring wells may be
// transferred with probability at most P_t.
struct ThresholdSpec {
  double P_t = 0.01;

  void validate() const;
};

// Resonant-carrier two-level transfer probability after time t for Rabi
// frequency chi (rad/s) at detuning delta (rad/s).
double rabi_population(double chi, double delta, double t);

// Pi-pulse duration (s) that keeps off-resonant transfer below P_t at
// detuning |delta| (rad/s): the pulse is slowed until the generalized Rabi
// sidelobe at delta fits under the threshold.
double gate_time(double delta, const ThresholdSpec& thr);

// Addressing figures for one superlattice configuration.
struct AddressingResult {
  double lambda2 = 0.0;        // m
  double A = 0.0;              // secondary intensity ratio
  double min_detuning = 0.0;   // smallest |dU_target - dU_other| (J)
  double gate_time_s = 0.0;    // pi-pulse time at the config's eta (s)
  double success = 0.0;        // exp(-gamma_sc * gate_time)
  int target_index = -1;       // addressed well (the deepest |0> well)
  int well_count = 0;
};

// Evaluates addressing at cfg: finds wells, picks the target as the deepest
// |0> well (both lattice maxima aligned), takes the minimum detuning to all other
// wells' shifts, converts to a pi-pulse time via `thr`, and folds in photon
// scattering from three primary-depth beams plus the secondary beam at the
// target. min_detuning scales linearly in eta, gate_time as 1/eta, and
// success is eta-independent. Configurations that cannot address (state
// well-count mismatch, or fewer than two wells) come back with success 0 and
// an infinite gate time.
AddressingResult evaluate_addressing(const Species& sp,
                                     const SuperlatticeConfig& cfg,
                                     const ThresholdSpec& thr);

// Scattering-limited success probability alone.
double success_probability(const Species& sp, const SuperlatticeConfig& cfg,
                           const ThresholdSpec& thr);

struct ScanAxis {
  double lo = 0.0, hi = 0.0;
  int count = 0;

  void validate() const;
  double at(int i) const;  // linear grid point i in [0, count)
};

// Row-major grid scan over (lambda2, A); rows iterate lambda2. Rows are
// computed in parallel (worker count from the SLGATE_WORKERS environment
// variable, default: hardware concurrency); results are ordered
// deterministically regardless of worker count.
std::vector<AddressingResult> scan_map(const Species& sp,
                                       const SuperlatticeConfig& base,
                                       const ScanAxis& lambda2_m,
                                       const ScanAxis& A,
                                       const ThresholdSpec& thr);

}  // namespace slgate
