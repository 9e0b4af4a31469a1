#include "slgate/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slgate {

namespace {

double sign(double v) { return (v > 0) - (v < 0); }

// One-sided shape-preserving endpoint derivative (three-point estimate).
double edge_derivative(double h0, double h1, double m0, double m1) {
  double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
  if (sign(d) != sign(m0))
    d = 0.0;
  else if (sign(m0) != sign(m1) && std::abs(d) > 3.0 * std::abs(m0))
    d = 3.0 * m0;
  return d;
}

}  // namespace

Pchip::Pchip(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw std::invalid_argument("Pchip requires >= 2 matching knots");
  for (size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw std::invalid_argument("Pchip knots must be strictly increasing");

  std::vector<double> h(n - 1), m(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    m[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  if (n == 2) {
    d_[0] = d_[1] = m[0];
    return;
  }
  for (size_t i = 1; i + 1 < n; ++i) {
    if (sign(m[i - 1]) * sign(m[i]) > 0) {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / m[i - 1] + w2 / m[i]);
    }
  }
  d_[0] = edge_derivative(h[0], h[1], m[0], m[1]);
  d_[n - 1] = edge_derivative(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
}

double Pchip::operator()(double t) const {
  if (t <= x_.front()) return y_.front();
  if (t >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  const size_t i = static_cast<size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

void ControlPulse::validate() const {
  if (t.size() < 2 || A1.size() != t.size() || phi.size() != t.size())
    throw std::invalid_argument("pulse requires >= 2 knots in all channels");
  if (t.front() != 0.0)
    throw std::invalid_argument("pulse must start at t = 0");
  for (size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw std::invalid_argument("pulse knot times must strictly increase");
  for (double a : A1)
    if (!(a >= 0))
      throw std::invalid_argument("pulse depth must be non-negative");
}

Pchip ControlPulse::A1_curve() const {
  validate();
  return Pchip(t, A1);
}

Pchip ControlPulse::phi_curve() const {
  validate();
  return Pchip(t, phi);
}

ControlPulse apply_pulse_errors(const ControlPulse& p, double amp_frac,
                                double phase_offset) {
  ControlPulse q = p;
  for (double& a : q.A1) a *= (1.0 + amp_frac);
  for (double& f : q.phi) f += phase_offset;
  return q;
}

}  // namespace slgate
