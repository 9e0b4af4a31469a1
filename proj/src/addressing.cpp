#include "slgate/addressing.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "slgate/constants.hpp"
#include "slgate/parallel.hpp"

namespace slgate {

using namespace constants;

int worker_count() {
  if (const char* env = std::getenv("SLGATE_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void ThresholdSpec::validate() const {
  if (!(P_t > 0) || !(P_t < 1))
    throw std::invalid_argument("P_t must lie in (0, 1)");
}

double rabi_population(double chi, double delta, double t) {
  const double omega = std::sqrt(chi * chi + delta * delta);
  if (omega == 0.0) return 0.0;
  const double s = std::sin(0.5 * omega * t);
  return (chi * chi) / (omega * omega) * s * s;
}

double gate_time(double delta, const ThresholdSpec& thr) {
  thr.validate();
  if (delta == 0.0)
    throw std::invalid_argument("gate_time requires a nonzero detuning");
  return pi / (std::sqrt(thr.P_t) * std::abs(delta));
}

void ScanAxis::validate() const {
  if (count < 1 || !(hi >= lo))
    throw std::invalid_argument("scan axis requires count >= 1 and hi >= lo");
  if (count > 1 && !(hi > lo))
    throw std::invalid_argument("scan axis with count > 1 requires hi > lo");
}

double ScanAxis::at(int i) const {
  if (count == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / (count - 1);
}

AddressingResult evaluate_addressing(const Species& sp,
                                     const SuperlatticeConfig& cfg,
                                     const ThresholdSpec& thr) {
  thr.validate();
  const WellScan scan = find_wells(sp, cfg);
  const int m = static_cast<int>(scan.wells.size());
  if (m < 2) {
    // pairing mismatch or a single well: no site to discriminate against
    AddressingResult res;
    res.lambda2 = cfg.lambda2;
    res.A = cfg.A;
    res.well_count = m;
    res.gate_time_s = std::numeric_limits<double>::infinity();
    return res;
  }

  int target = 0;
  for (int i = 1; i < m; ++i)
    if (scan.wells[i].U0 < scan.wells[target].U0) target = i;

  double min_det = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    if (i == target) continue;
    min_det = std::min(min_det,
                       std::abs(scan.wells[target].dU() - scan.wells[i].dU()));
  }

  AddressingResult res;
  res.lambda2 = cfg.lambda2;
  res.A = cfg.A;
  res.min_detuning = min_det;
  res.target_index = target;
  res.well_count = m;

  if (min_det == 0.0) {
    res.gate_time_s = std::numeric_limits<double>::infinity();
    res.success = 0.0;
    return res;
  }
  res.gate_time_s = gate_time(min_det / hbar, thr);

  // Photon scattering of the addressed atom: three lattice beams at the
  // primary depth (3D confinement) plus the secondary beam, all evaluated at
  // their intensity maxima.
  const BeamSpec unit1{cfg.lambda1, 1.0, cfg.polarization};
  const double i1 = cfg.eta * recoil_energy(sp, cfg.lambda1) /
                    std::abs(dipole_potential(sp, sp.state0(), unit1));
  const double gamma_sc =
      3.0 * scattering_rate(sp, sp.state0(),
                            BeamSpec{cfg.lambda1, i1, cfg.polarization}) +
      scattering_rate(sp, sp.state0(),
                      BeamSpec{cfg.lambda2, cfg.A * i1, cfg.polarization});
  res.success = std::exp(-gamma_sc * res.gate_time_s);
  return res;
}

double success_probability(const Species& sp, const SuperlatticeConfig& cfg,
                           const ThresholdSpec& thr) {
  return evaluate_addressing(sp, cfg, thr).success;
}

std::vector<AddressingResult> scan_map(const Species& sp,
                                       const SuperlatticeConfig& base,
                                       const ScanAxis& lambda2_m,
                                       const ScanAxis& A,
                                       const ThresholdSpec& thr) {
  lambda2_m.validate();
  A.validate();
  thr.validate();
  std::vector<AddressingResult> out(
      static_cast<size_t>(lambda2_m.count) * A.count);
  parallel_for(lambda2_m.count, [&](int row) {
    SuperlatticeConfig cfg = base;
    cfg.lambda2 = lambda2_m.at(row);
    for (int j = 0; j < A.count; ++j) {
      cfg.A = A.at(j);
      out[static_cast<size_t>(row) * A.count + j] =
          evaluate_addressing(sp, cfg, thr);
    }
  });
  return out;
}

}  // namespace slgate
