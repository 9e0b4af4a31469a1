#include "slgate/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "slgate/constants.hpp"

namespace slgate {

using namespace constants;

void Grid::validate() const {
  if (npoints < 2 || !(length > 0))
    throw std::invalid_argument("grid requires npoints >= 2 and length > 0");
}

std::vector<double> Grid::kvalues() const {
  validate();
  std::vector<double> k(npoints);
  const double dk = two_pi / length;
  for (int i = 0; i < npoints; ++i) {
    const int m = (i <= npoints / 2) ? i : i - npoints;
    k[i] = dk * m;
  }
  return k;
}

Wavefunction Wavefunction::zero(const Grid& g) {
  g.validate();
  Wavefunction w;
  w.grid = g;
  w.amp.assign(g.npoints, {0.0, 0.0});
  return w;
}

double Wavefunction::norm2() const {
  double s = 0.0;
  for (const auto& a : amp) s += std::norm(a);
  return s * grid.dx();
}

void Wavefunction::normalize() {
  const double n2 = norm2();
  if (!(n2 > 0)) throw std::runtime_error("cannot normalize a null state");
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& a : amp) a *= scale;
}

std::complex<double> Wavefunction::overlap(const Wavefunction& other) const {
  if (!(grid == other.grid))
    throw std::invalid_argument("overlap requires matching grids");
  std::complex<double> s{0.0, 0.0};
  for (size_t i = 0; i < amp.size(); ++i) s += std::conj(amp[i]) * other.amp[i];
  return s * grid.dx();
}

double Wavefunction::mean_x() const {
  double s = 0.0;
  for (size_t i = 0; i < amp.size(); ++i)
    s += std::norm(amp[i]) * grid.x(static_cast<int>(i));
  return s * grid.dx() / norm2();
}

double Wavefunction::edge_density(int margin) const {
  double peak = 0.0;
  const int n = static_cast<int>(amp.size());
  for (int i = 0; i < std::min(margin, n); ++i) {
    peak = std::max(peak, std::norm(amp[i]));
    peak = std::max(peak, std::norm(amp[n - 1 - i]));
  }
  return peak;
}

double density_overlap(const Wavefunction& a, const Wavefunction& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("density_overlap requires matching grids");
  double s = 0.0;
  for (size_t i = 0; i < a.amp.size(); ++i)
    s += std::norm(a.amp[i]) * std::norm(b.amp[i]);
  return s * a.grid.dx();
}

}  // namespace slgate
