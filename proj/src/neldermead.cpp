#include "slgate/neldermead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace slgate {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

double diameter(const std::vector<Vertex>& s) {
  double d = 0.0;
  for (size_t i = 1; i < s.size(); ++i)
    for (size_t j = 0; j < s[i].x.size(); ++j)
      d = std::max(d, std::abs(s[i].x[j] - s[0].x[j]));
  return d;
}

}  // namespace

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x0, const NelderMeadOptions& opt) {
  const size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead requires dimension >= 1");
  if (opt.initial_step.size() != n)
    throw std::invalid_argument("initial_step size must match dimension");

  // dimension-adaptive coefficients
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / n;
  const double gamma = 0.75 - 0.5 / n;
  const double delta = 1.0 - 1.0 / n;

  NelderMeadResult best;
  best.x = x0;
  best.fx = f(x0);
  best.evals = 1;

  std::vector<double> seed = x0;
  double scale = 1.0;

  for (int round = 0; round <= opt.restarts; ++round) {
    std::vector<Vertex> s;
    s.push_back({seed, round == 0 ? best.fx : f(seed)});
    if (round != 0) ++best.evals;
    for (size_t i = 0; i < n; ++i) {
      auto xi = seed;
      xi[i] += opt.initial_step[i] * scale;
      s.push_back({xi, f(xi)});
      ++best.evals;
    }

    auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    std::stable_sort(s.begin(), s.end(), by_f);

    while (best.evals < opt.max_evals) {
      if (diameter(s) < opt.diameter_tol) {
        best.converged = true;
        break;
      }
      // centroid of all but worst
      std::vector<double> c(n, 0.0);
      for (size_t i = 0; i < n; ++i) {
        for (size_t v = 0; v < n; ++v) c[i] += s[v].x[i];
        c[i] /= static_cast<double>(n);
      }
      const Vertex& w = s[n];
      std::vector<double> xr(n);
      for (size_t i = 0; i < n; ++i) xr[i] = c[i] + alpha * (c[i] - w.x[i]);
      const double fr = f(xr);
      ++best.evals;

      if (fr < s[0].f) {
        std::vector<double> xe(n);
        for (size_t i = 0; i < n; ++i) xe[i] = c[i] + beta * (xr[i] - c[i]);
        const double fe = f(xe);
        ++best.evals;
        s[n] = (fe < fr) ? Vertex{std::move(xe), fe} : Vertex{std::move(xr), fr};
      } else if (fr < s[n - 1].f) {
        s[n] = {std::move(xr), fr};
      } else {
        bool shrink = false;
        if (fr < w.f) {
          std::vector<double> xc(n);
          for (size_t i = 0; i < n; ++i) xc[i] = c[i] + gamma * (xr[i] - c[i]);
          const double fc = f(xc);
          ++best.evals;
          if (fc <= fr)
            s[n] = {std::move(xc), fc};
          else
            shrink = true;
        } else {
          std::vector<double> xc(n);
          for (size_t i = 0; i < n; ++i) xc[i] = c[i] - gamma * (c[i] - w.x[i]);
          const double fc = f(xc);
          ++best.evals;
          if (fc < w.f)
            s[n] = {std::move(xc), fc};
          else
            shrink = true;
        }
        if (shrink) {
          for (size_t v = 1; v <= n; ++v) {
            for (size_t i = 0; i < n; ++i)
              s[v].x[i] = s[0].x[i] + delta * (s[v].x[i] - s[0].x[i]);
            s[v].f = f(s[v].x);
            ++best.evals;
          }
        }
      }
      std::stable_sort(s.begin(), s.end(), by_f);
    }

    if (s[0].f < best.fx) {
      best.fx = s[0].f;
      best.x = s[0].x;
    }
    seed = best.x;
    scale *= opt.restart_shrink;
    if (best.evals >= opt.max_evals) break;
  }
  return best;
}

}  // namespace slgate
