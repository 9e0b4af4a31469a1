#include "slgate/dynamics.hpp"

#include <fftw3.h>
#include <lapacke.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "slgate/constants.hpp"

namespace slgate {

using namespace constants;

void PropagationSettings::validate() const {
  if (!(hbar > 0) || !(mass > 0))
    throw std::invalid_argument("hbar and mass must be positive");
  if (!(dt > 0) || steps < 1)
    throw std::invalid_argument("dt must be positive and steps >= 1");
  if (record_stride < 0)
    throw std::invalid_argument("record_stride must be >= 0");
}

namespace {

// FFTW plan creation is not thread-safe; execution on distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

// Per-thread batched FFT workspace: one contiguous buffer of `howmany`
// transforms of length n, planned in place.  FFTW_ESTIMATE keeps the plan
// choice deterministic so replayed runs are bitwise reproducible.
struct BatchFFT {
  int n = 0, howmany = 0;
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;

  BatchFFT(int n_, int howmany_) : n(n_), howmany(howmany_) {
    std::lock_guard lock(fftw_planner_mutex());
    buf = fftw_alloc_complex(static_cast<size_t>(n) * howmany);
    const int dims[1] = {n};
    fwd = fftw_plan_many_dft(1, dims, howmany, buf, nullptr, 1, n, buf,
                             nullptr, 1, n, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_many_dft(1, dims, howmany, buf, nullptr, 1, n, buf,
                             nullptr, 1, n, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!buf || !fwd || !bwd) throw std::runtime_error("FFTW planning failed");
  }
  BatchFFT(const BatchFFT&) = delete;
  BatchFFT& operator=(const BatchFFT&) = delete;
  ~BatchFFT() {
    std::lock_guard lock(fftw_planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
  }

  std::complex<double>* data() {
    return reinterpret_cast<std::complex<double>*>(buf);
  }
};

BatchFFT& thread_fft(int n, int howmany) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<BatchFFT>> cache;
  auto& slot = cache[{n, howmany}];
  if (!slot) slot = std::make_unique<BatchFFT>(n, howmany);
  return *slot;
}

}  // namespace

void split_step(std::vector<Wavefunction>& batch, const PotentialFill& vfill,
                const PropagationSettings& s, const RecordSink& on_record) {
  s.validate();
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const Grid g = batch.front().grid;
  g.validate();
  for (const auto& w : batch)
    if (!(w.grid == g) || static_cast<int>(w.amp.size()) != g.npoints)
      throw std::invalid_argument("batch members must share one grid");

  const int n = g.npoints;
  const int m = static_cast<int>(batch.size());
  BatchFFT& fft = thread_fft(n, m);
  std::complex<double>* buf = fft.data();
  for (int a = 0; a < m; ++a)
    std::memcpy(buf + static_cast<size_t>(a) * n, batch[a].amp.data(),
                sizeof(std::complex<double>) * n);

  // kinetic factor, 1/n folded in for the unnormalized inverse transform
  const std::vector<double> k = g.kvalues();
  std::vector<std::complex<double>> kin(n);
  for (int i = 0; i < n; ++i) {
    const double ek = s.hbar * k[i] * k[i] / (2.0 * s.mass);
    kin[i] = std::polar(1.0 / n, -ek * s.dt);
  }

  std::vector<double> va(n), vb(n), vnext(n);
  std::vector<std::complex<double>> phase(n);
  const double half = -0.5 * s.dt / s.hbar;

  auto apply_phase = [&](const std::vector<double>& u1,
                         const std::vector<double>* u2) {
    for (int i = 0; i < n; ++i)
      phase[i] = std::polar(1.0, half * (u2 ? u1[i] + (*u2)[i] : u1[i]));
    for (int a = 0; a < m; ++a) {
      std::complex<double>* p = buf + static_cast<size_t>(a) * n;
      for (int i = 0; i < n; ++i) p[i] *= phase[i];
    }
  };
  auto apply_kinetic = [&] {
    fftw_execute(fft.fwd);
    for (int a = 0; a < m; ++a) {
      std::complex<double>* p = buf + static_cast<size_t>(a) * n;
      for (int i = 0; i < n; ++i) p[i] *= kin[i];
    }
    fftw_execute(fft.bwd);
  };
  auto sync_batch = [&] {
    for (int a = 0; a < m; ++a)
      std::memcpy(batch[a].amp.data(), buf + static_cast<size_t>(a) * n,
                  sizeof(std::complex<double>) * n);
  };
  auto record_due = [&](int step) {
    return step == s.steps ||
           (s.record_stride > 0 && step % s.record_stride == 0);
  };

  if (on_record) on_record(s.t0, batch);

  vfill(s.t0 + 0.25 * s.dt, va);
  apply_phase(va, nullptr);
  for (int step = 0; step < s.steps; ++step) {
    const double t = s.t0 + step * s.dt;
    apply_kinetic();
    vfill(t + 0.75 * s.dt, vb);
    const bool closing = (step + 1 == s.steps) || record_due(step + 1);
    if (closing) {
      apply_phase(vb, nullptr);
      if (on_record && record_due(step + 1)) {
        sync_batch();
        on_record(t + s.dt, batch);
      }
      if (step + 1 < s.steps) {
        vfill(t + s.dt + 0.25 * s.dt, va);
        apply_phase(va, nullptr);
      }
    } else {
      vfill(t + s.dt + 0.25 * s.dt, vnext);
      apply_phase(vb, &vnext);
    }
  }
  sync_batch();
}

EigenStates window_eigenstates(const Grid& g, const std::vector<double>& v,
                               double center, double halfwidth, int count,
                               double hbar, double mass) {
  g.validate();
  if (static_cast<int>(v.size()) != g.npoints)
    throw std::invalid_argument("potential size must match grid");
  if (!(halfwidth > 0) || 2.0 * halfwidth >= g.length)
    throw std::invalid_argument("window must be positive and within one period");
  if (count < 1) throw std::invalid_argument("count must be >= 1");

  const int n = g.npoints;
  const double dx = g.dx();
  // window sample indices (exclusive of Dirichlet walls), periodic wrap
  const int i_lo =
      static_cast<int>(std::ceil((center - halfwidth - g.x0) / dx));
  const int i_hi =
      static_cast<int>(std::floor((center + halfwidth - g.x0) / dx));
  const int w = i_hi - i_lo + 1;
  if (w < count + 2)
    throw std::invalid_argument("window too small for requested state count");

  const double c = hbar * hbar / (2.0 * mass * dx * dx);
  std::vector<double> diag(w), off(w - 1, -c);
  std::vector<int> idx(w);
  for (int j = 0; j < w; ++j) {
    idx[j] = ((i_lo + j) % n + n) % n;
    diag[j] = 2.0 * c + v[idx[j]];
  }

  std::vector<double> evals(w), z(static_cast<size_t>(w) * count);
  std::vector<lapack_int> isuppz(2 * std::max(1, count));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_COL_MAJOR, 'V', 'I', w, diag.data(), off.data(), 0.0, 0.0, 1,
      count, 0.0, &found, evals.data(), z.data(), w, isuppz.data());
  if (info != 0 || found < count)
    throw std::runtime_error("tridiagonal eigensolve failed, info=" +
                             std::to_string(info));

  EigenStates out;
  out.energies.assign(evals.begin(), evals.begin() + count);
  for (int s = 0; s < count; ++s) {
    Wavefunction wf = Wavefunction::zero(g);
    const double scale = 1.0 / std::sqrt(dx);  // unit l2 -> unit integral
    double sgn = 0.0;
    for (int j = 0; j < w; ++j) {
      const double val = z[static_cast<size_t>(s) * w + j] * scale;
      wf.amp[idx[j]] = val;
      if (sgn == 0.0 && std::abs(val) > 1e-8) sgn = (val > 0) ? 1.0 : -1.0;
    }
    // fix a deterministic sign: first significant lobe positive
    if (sgn < 0)
      for (auto& a : wf.amp) a = -a;
    out.states.push_back(std::move(wf));
  }
  return out;
}

double InteractionSpec::g1d() const {
  if (!(scattering_length > 0) || !(nu_y > 0) || !(nu_z > 0))
    throw std::invalid_argument("interaction spec requires positive entries");
  return 2.0 * scattering_length * h_planck * std::sqrt(nu_y * nu_z);
}

double interaction_energy(double g1d, const Wavefunction& a,
                          const Wavefunction& b) {
  return 2.0 * g1d * density_overlap(a, b);
}

double accumulated_phase(const std::vector<double>& t,
                         const std::vector<double>& u, double hbar) {
  if (t.size() != u.size() || t.size() < 2)
    throw std::invalid_argument("need >= 2 matching samples");
  double s = 0.0;
  for (size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1]))
      throw std::invalid_argument("sample times must strictly increase");
    s += 0.5 * (u[i] + u[i - 1]) * (t[i] - t[i - 1]);
  }
  return s / hbar;
}

}  // namespace slgate
