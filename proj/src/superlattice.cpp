#include "slgate/superlattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "slgate/constants.hpp"

namespace slgate {

using namespace constants;

void SuperlatticeConfig::validate() const {
  if (!(lambda1 > 0) || !(lambda2 > 0))
    throw std::invalid_argument("lattice wavelengths must be positive");
  if (!(lambda2 < lambda1))
    throw std::invalid_argument("lambda2 must be shorter than lambda1");
  if (!(eta > 0))
    throw std::invalid_argument("eta must be positive");
  if (A < 0)
    throw std::invalid_argument("A must be non-negative");
  if (std::abs(polarization) > 1.0)
    throw std::invalid_argument("polarization must lie in [-1, 1]");
}

double slp_length(double lambda1, double lambda2) {
  if (!(lambda2 > 0) || !(lambda2 < lambda1))
    throw std::invalid_argument("require 0 < lambda2 < lambda1");
  return 0.5 / (1.0 / lambda2 - 1.0 / lambda1);
}

double wavelength_for_cycles(double lambda1, int n) {
  if (!(lambda1 > 0) || n < 2)
    throw std::invalid_argument("require lambda1 > 0 and n >= 2");
  return lambda1 * (n - 1.0) / n;
}

namespace {

// Per-state sinusoidal depth coefficients: U_s(x) = c1*cos^2(k1 x + phi1)
//                                                 + c2*cos^2(k2 x + phi2),
// with both c negative (red-detuned traps).
struct LatticeCoeffs {
  double c1, c2, k1, k2, phi1, phi2;

  double operator()(double x) const {
    const double a = std::cos(k1 * x + phi1);
    const double b = std::cos(k2 * x + phi2);
    return c1 * a * a + c2 * b * b;
  }
};

LatticeCoeffs state_coeffs(const Species& sp, const SuperlatticeConfig& cfg,
                           const QubitState& state) {
  cfg.validate();
  const BeamSpec unit1{cfg.lambda1, 1.0, cfg.polarization};
  const double i1 =
      cfg.eta * recoil_energy(sp, cfg.lambda1) /
      std::abs(dipole_potential(sp, sp.state0(), unit1));
  const BeamSpec b1{cfg.lambda1, i1, cfg.polarization};
  const BeamSpec b2{cfg.lambda2, cfg.A * i1, cfg.polarization};
  return {dipole_potential(sp, state, b1), dipole_potential(sp, state, b2),
          two_pi / cfg.lambda1, two_pi / cfg.lambda2, cfg.phi1, cfg.phi2};
}

template <typename F>
double golden_min(F f, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.61803398874989484820;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// All local minima of a periodic 1D function over [xlo, xlo + period).
std::vector<double> periodic_minima(const LatticeCoeffs& v, double xlo,
                                    double period, int samples, double tol) {
  std::vector<double> vals(samples);
  const double dx = period / samples;
  for (int i = 0; i < samples; ++i) vals[i] = v(xlo + i * dx);
  std::vector<double> mins;
  for (int i = 0; i < samples; ++i) {
    const double prev = vals[(i + samples - 1) % samples];
    const double next = vals[(i + 1) % samples];
    if (vals[i] < prev && vals[i] <= next) {
      const double xi = xlo + i * dx;
      double x = golden_min(v, xi - dx, xi + dx, tol);
      // wrap into [xlo, xlo + period)
      x -= period * std::floor((x - xlo) / period);
      mins.push_back(x);
    }
  }
  std::sort(mins.begin(), mins.end());
  // drop wrap-around duplicates
  std::vector<double> out;
  for (double x : mins) {
    if (out.empty() ||
        (x - out.back() > 1e-6 * period &&
         (xlo + period) - x + (out.front() - xlo) > 1e-6 * period))
      out.push_back(x);
  }
  return out;
}

// Circular distance on a period.
double circ_dist(double a, double b, double period) {
  double d = std::abs(a - b);
  return std::min(d, period - d);
}

}  // namespace

double potential(const Species& sp, const SuperlatticeConfig& cfg,
                 const QubitState& state, double x) {
  return state_coeffs(sp, cfg, state)(x);
}

WellScan find_wells(const Species& sp, const SuperlatticeConfig& cfg) {
  cfg.validate();
  const double period = slp_length(cfg.lambda1, cfg.lambda2);
  const double xlo = -0.5 * period;
  const double halves = period / (0.5 * cfg.lambda2);
  const int samples = 200 * static_cast<int>(std::ceil(halves));
  const double tol = 1e-12 * period;

  const LatticeCoeffs v0 = state_coeffs(sp, cfg, sp.state0());
  const LatticeCoeffs v1 = state_coeffs(sp, cfg, sp.state1());
  std::vector<double> m0 = periodic_minima(v0, xlo, period, samples, tol);
  std::vector<double> m1 = periodic_minima(v1, xlo, period, samples, tol);

  WellScan scan;
  scan.count0 = static_cast<int>(m0.size());
  scan.count1 = static_cast<int>(m1.size());
  const double n_exact = 1.0 / (1.0 - cfg.lambda2 / cfg.lambda1);
  const double n_round = std::round(n_exact);
  if (n_round >= 2 && std::abs(n_exact - n_round) < 1e-6 * n_round)
    scan.cycles = static_cast<int>(n_round);
  if (m0.size() != m1.size()) return scan;  // pairing undefined
  const int m = static_cast<int>(m0.size());

  // Pair the sorted minima lists; the |1> list may be rotated by one if a
  // minimum shifted across the period boundary.
  int best_rot = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(m, 1); ++r) {
    double cost = 0;
    for (int i = 0; i < m; ++i)
      cost += circ_dist(m0[i], m1[(i + r) % m], period);
    if (cost < best_cost) {
      best_cost = cost;
      best_rot = r;
    }
  }

  for (int i = 0; i < m; ++i) {
    Well w;
    w.index = i;
    w.x0 = m0[i];
    w.x1 = m1[(i + best_rot) % m];
    w.U0 = v0(w.x0);
    w.U1 = v1(w.x1);
    scan.wells.push_back(w);
  }
  return scan;
}

std::vector<double> differential_shifts(const Species& sp,
                                        const SuperlatticeConfig& cfg) {
  std::vector<double> out;
  for (const Well& w : find_wells(sp, cfg).wells) out.push_back(w.dU());
  return out;
}

}  // namespace slgate
