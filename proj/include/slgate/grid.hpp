#pragma once

#include <complex>
#include <vector>

namespace slgate {

// Uniform periodic 1D grid on [x0, x0 + length), npoints samples.
struct Grid {
  double x0 = 0.0;
  double length = 0.0;
  int npoints = 0;

  void validate() const;  // throws std::invalid_argument
  double dx() const { return length / npoints; }
  double x(int i) const { return x0 + dx() * i; }
  // FFT angular wavenumbers in standard transform order.
  std::vector<double> kvalues() const;
  bool operator==(const Grid&) const = default;
};

// Complex amplitude sampled on a Grid; inner products use the dx measure.
struct Wavefunction {
  Grid grid;
  std::vector<std::complex<double>> amp;

  static Wavefunction zero(const Grid& g);
  double norm2() const;  // integral of |amp|^2
  void normalize();      // scales to norm2() == 1; throws on zero norm
  std::complex<double> overlap(const Wavefunction& other) const;  // <this|other>
  double mean_x() const;
  // Largest |amp|^2 within `margin` grid points of either domain edge.
  double edge_density(int margin = 3) const;
};

// integral |a|^2 |b|^2 dx  (pair density overlap)
double density_overlap(const Wavefunction& a, const Wavefunction& b);

}  // namespace slgate
