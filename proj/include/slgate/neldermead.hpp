#pragma once

#include <functional>
#include <vector>

namespace slgate {

struct NelderMeadOptions {
  std::vector<double> initial_step;  // per-coordinate simplex extent
  int max_evals = 20000;
  double diameter_tol = 1e-6;  // converged when simplex shrinks below this
  int restarts = 0;            // re-seed around the best point, shrunken steps
  double restart_shrink = 0.25;
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  int evals = 0;
  bool converged = false;
};

// Downhill-simplex minimization (adaptive coefficients scaled by dimension).
// Deterministic: no randomness, ties broken by index order.
NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const NelderMeadOptions& opt);

}  // namespace slgate
