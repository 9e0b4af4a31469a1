#pragma once

#include <string>
#include <vector>

#include "slgate/dynamics.hpp"
#include "slgate/neldermead.hpp"
#include "slgate/pulse.hpp"
#include "slgate/species.hpp"

namespace slgate {

// Static preparation-error box: the pulse may be reproduced with a fractional
// amplitude error up to +-amp_frac and a lattice-phase offset up to
// +-phase_offset (rad).
struct ErrorBox {
  double amp_frac = 1e-3;
  double phase_offset = 0.002 * 3.14159265358979323846;
};

// Well-merging problem in the commensurate superlattice: one movable primary
// lattice (depth A1(t), phase phi(t), both controlled) over a fixed secondary
// lattice of depth A2. Natural units: length lambda2/2, energy E_r(lambda2),
// time hbar/E_r(lambda2). The domain spans one superlattice period with n
// secondary wells at half-integer positions; the pair to merge starts at
// -0.5 and +0.5.
struct MergeConfig {
  int n = 5;                       // secondary half-waves per period
  double lambda1 = 1064e-9;        // m
  double A2 = 32.0;                // secondary depth, E_r(lambda2)
  double transverse_depth = 32.0;  // transverse lattice depth, E_r(lambda1)
  int grid_points = 2048;
  double dt = 1e-3;                // natural time units
  int record_stride = 25;
  double pair_split_limit = 1e-3;  // max initial |L>/|R> splitting, E_r(lambda2)
  ErrorBox box;

  double lambda2() const;
  void validate() const;
};

// Which figure of merit an optimization run maximizes. `robust` is the worst
// f_all over the error-box centre and four corners, a five-point stand-in for
// the full 3x3 box minimum (which the corners dominate in practice).
enum class Objective { target, all, robust };

struct FidelityReport {
  bool valid = false;
  std::string diagnostic;          // set when !valid
  double f_target = 0.0;
  double f_all = 0.0;
  double pg = 0.0, pe = 0.0;       // merged ground/excited mapping fidelities
  double pair_split = 0.0;         // initial splitting (natural energy)
  double hold_overlap = 0.0;       // final-basin eigenstate density overlap
  std::vector<double> record_t;    // natural time
  std::vector<double> record_overlap;  // pair density overlap at records
};

struct GateTimes {
  int multiples = 0;   // smallest odd multiple making the hold non-negative
  double hold = 0.0;   // s
  double total = 0.0;  // 2*tau + hold, s
};

struct GateReport {
  double tau_nat = 0.0, tau_s = 0.0;
  double f_target = 0.0, f_all = 0.0, f_error = 0.0;
  double merge_phase = 0.0;     // single-merge interaction phase (rad)
  double u_int_hold = 0.0;      // merged-well interaction energy (J)
  GateTimes swap, sqrt_swap;
  double p_sc_swap = 0.0, p_sc_sqrt_swap = 0.0;
  ControlPulse pulse;
};

class MergeProblem {
 public:
  MergeProblem(const Species& sp, const MergeConfig& cfg);

  const MergeConfig& config() const { return cfg_; }
  const Species& species() const { return sp_; }
  double er2() const { return er2_; }            // J
  double er2_rad() const;                        // rad/s
  double tau_nat(double tau_s) const;            // s -> natural time
  double g_natural() const { return g_nat_; }    // interaction, natural units

  // Full fidelity pipeline for one pulse: initial localized pair (plus
  // neighbours when requested), split-step propagation, projection onto the
  // merged well's lowest doublet and the neighbours' ground states.
  FidelityReport evaluate(const ControlPulse& pulse,
                          bool with_neighbors) const;

  // Worst f_all over the full 3x3 error box (amp x phase corners + center).
  double fidelity_error(const ControlPulse& pulse) const;

  // Propagates the target pair through the pulse, applies the motion
  // reversal (momenta flip at the turning point), and runs the control
  // curves backwards; returns the product of the pair's return
  // probabilities |<psi_a(0)|psi_a(back)>|^2.  Exact reversibility of the
  // propagator makes this an invariant: any loss signals a broken or
  // time-asymmetric integrator step.
  double reversal_overlap(const ControlPulse& pulse) const;

  // Smoothstep depth ramp to final_depth with constant phase bias.
  ControlPulse seed_pulse(double tau_natural, int interior_knots,
                          double final_depth, double phase_bias) const;

  // Downhill-simplex refinement of all knot values except the pinned initial
  // depth knot. Knot times stay fixed. Returns the best pulse found.
  ControlPulse optimize(const ControlPulse& seed, Objective obj,
                        const NelderMeadOptions& nm) const;

  // f_all landscape over the error grid, row-major with amplitude as the
  // slow axis: rows i in [0, na) span +-amp_half, columns j span +-phase_half.
  std::vector<double> error_landscape(const ControlPulse& pulse,
                                      double amp_half, double phase_half,
                                      int na, int np) const;

  // Everything the gate needs: fidelities, interaction phase, hold times for
  // SWAP and sqrt(SWAP), total times, and scattering probabilities.
  GateReport report(const ControlPulse& pulse) const;

  // x-positions (natural units) of the secondary wells, ascending.
  const std::vector<double>& wells() const { return wells_; }

 private:
  struct PotentialTables;
  void fill_potential(double a1, double phi, std::vector<double>& v) const;
  double objective_value(const ControlPulse& pulse, Objective obj) const;

  Species sp_;
  MergeConfig cfg_;
  Grid grid_;
  double er2_ = 0.0;
  double g_nat_ = 0.0;
  std::vector<double> vsec_, cos2q_, sin2q_;
  std::vector<double> wells_;    // all well centers
  std::vector<double> atoms_;    // [targets, neighbours...]
};

double merge_fidelity_target(const MergeProblem& mp, const ControlPulse& p);
double merge_fidelity_all(const MergeProblem& mp, const ControlPulse& p);
double merge_fidelity_error(const MergeProblem& mp, const ControlPulse& p);

// Hold time making twice the merge phase plus U_int*t_hold/hbar reach the
// smallest attainable odd multiple of phase_unit (pi for SWAP, pi/2 for
// sqrt(SWAP)); even multiples of pi/2 give a SWAP phase and even multiples
// of pi the identity.  u_int_rad = U_int/hbar in rad/s; tau_s = single
// merge duration.
GateTimes assemble_gate_times(double merge_phase, double u_int_rad,
                              double tau_s, double phase_unit);

// Photon-scattering probability for all n atoms over one gate of duration
// total_s: secondary lattice at A2, primary at the pulse-averaged depth, and
// two transverse lattices, with fixed intensity-occupancy weights.
double gate_scattering(const Species& sp, const MergeConfig& cfg,
                       double a1_mean, double total_s);

// Relative phase between the two lattices acquired by shifting the primary
// laser frequency by delta_nu over a path of length path_m (rad).
double frequency_to_phase(double delta_nu, double path_m);

struct SweepSettings {
  std::vector<double> taus_us;      // ascending
  int interior_knots = 8;
  double seed_final_depth = 45.0;   // E_r(lambda2)
  double seed_phase_bias = 0.08 * 3.14159265358979323846;
  Objective sweep_objective = Objective::target;
  int max_evals_cold = 1200;
  int max_evals_warm = 500;
  int polish_count = 1;             // best candidates re-optimized for
  int polish_evals = 300;           //   robustness (Objective::robust)
  double step_depth = 1.5;          // initial simplex extent, depth knots
  double step_phase = 0.03;         //   and phase knots (rad)
  double warm_step_scale = 0.4;     // simplex shrink for warm-started runs

  void validate() const;
};

struct SweepPoint {
  double tau_us = 0.0;
  GateReport report;
};

// Continuation sweep over gate durations: one pass from the longest duration
// down (cold seed at the top), one pass back up, every optimization after the
// first warm-started from its neighbour's optimum (knot values carried over
// at rescaled times). Keeps the per-duration best, then re-optimizes the
// polish_count best points for worst-case robustness.
std::vector<SweepPoint> continuation_sweep(const MergeProblem& mp,
                                           const SweepSettings& s);

}  // namespace slgate
