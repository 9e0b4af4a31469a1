#pragma once

#include <vector>

namespace slgate {

// Shape-preserving monotone cubic interpolant (PCHIP) through (x, y) knots.
// Between knots the curve is C1 and never overshoots the local data range.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y);

  // Evaluate at t; clamps to the end values outside [x.front(), x.back()].
  double operator()(double t) const;

 private:
  std::vector<double> x_, y_, d_;  // knots and endpoint-adjusted derivatives
};

// Two-channel control pulse over t in [0, tau]: primary lattice depth A1(t)
// (in secondary recoil units) and primary lattice phase phi(t) (rad), each
// interpolated through shared knot times by PCHIP.
struct ControlPulse {
  std::vector<double> t;    // strictly increasing, t.front() == 0
  std::vector<double> A1;   // >= 0 at every knot
  std::vector<double> phi;  // rad

  void validate() const;  // throws std::invalid_argument
  double tau() const { return t.empty() ? 0.0 : t.back(); }
  Pchip A1_curve() const;
  Pchip phi_curve() const;
  double A1_at(double time) const { return A1_curve()(time); }
  double phi_at(double time) const { return phi_curve()(time); }
};

// Static amplitude and phase error applied to a pulse:
// A1 -> A1 * (1 + amp_frac), phi -> phi + phase_offset.
ControlPulse apply_pulse_errors(const ControlPulse& p, double amp_frac,
                                double phase_offset);

}  // namespace slgate
