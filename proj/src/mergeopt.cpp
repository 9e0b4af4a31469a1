#include "slgate/mergeopt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slgate/atomphys.hpp"
#include "slgate/constants.hpp"
#include "slgate/parallel.hpp"
#include "slgate/superlattice.hpp"

namespace slgate {

using namespace constants;

namespace {

constexpr double kMassNat = pi * pi / 2.0;  // natural-unit atom mass

double smoothstep5(double u) {
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

// Barrier positions (local maxima of v, periodic) bracketing the basin that
// contains xq: [left <= xq < right], possibly extended across the boundary.
std::pair<double, double> basin_window(const Grid& g,
                                       const std::vector<double>& v,
                                       double xq) {
  const int n = g.npoints;
  std::vector<double> bx;
  for (int i = 0; i < n; ++i) {
    const double prev = v[(i + n - 1) % n];
    const double next = v[(i + 1) % n];
    if (v[i] >= prev && v[i] > next) bx.push_back(g.x(i));
  }
  if (bx.empty()) throw std::runtime_error("potential has no barriers");
  std::sort(bx.begin(), bx.end());
  double left = 0, right = 0;
  bool found_r = false, found_l = false;
  for (double b : bx)
    if (b > xq) {
      right = b;
      found_r = true;
      break;
    }
  if (!found_r) right = bx.front() + g.length;
  for (auto it = bx.rbegin(); it != bx.rend(); ++it)
    if (*it <= xq) {
      left = *it;
      found_l = true;
      break;
    }
  if (!found_l) left = bx.back() - g.length;
  return {left, right};
}

Wavefunction basin_ground(const Grid& g, const std::vector<double>& v,
                          double xq) {
  const auto [l, r] = basin_window(g, v, xq);
  return window_eigenstates(g, v, 0.5 * (l + r), 0.5 * (r - l), 1, 1.0,
                            kMassNat)
      .states[0];
}

}  // namespace

double MergeConfig::lambda2() const {
  return wavelength_for_cycles(lambda1, n);
}

void MergeConfig::validate() const {
  if (n < 2) throw std::invalid_argument("merge requires n >= 2 wells");
  if (!(lambda1 > 0)) throw std::invalid_argument("lambda1 must be positive");
  if (!(A2 > 0)) throw std::invalid_argument("A2 must be positive");
  if (!(transverse_depth > 0))
    throw std::invalid_argument("transverse_depth must be positive");
  if (grid_points < 64)
    throw std::invalid_argument("grid_points must be >= 64");
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  if (record_stride < 1)
    throw std::invalid_argument("record_stride must be >= 1");
  if (!(pair_split_limit > 0))
    throw std::invalid_argument("pair_split_limit must be positive");
  if (box.amp_frac < 0 || box.phase_offset < 0)
    throw std::invalid_argument("error box extents must be non-negative");
}

MergeProblem::MergeProblem(const Species& sp, const MergeConfig& cfg)
    : sp_(sp), cfg_(cfg) {
  cfg_.validate();
  const double l2 = cfg_.lambda2();
  er2_ = recoil_energy(sp_, l2);
  grid_ = Grid{-static_cast<double>(cfg_.n / 2),
               static_cast<double>(cfg_.n), cfg_.grid_points};
  grid_.validate();

  const double q1 = pi * (cfg_.n - 1.0) / cfg_.n;
  const int np = grid_.npoints;
  vsec_.resize(np);
  cos2q_.resize(np);
  sin2q_.resize(np);
  for (int i = 0; i < np; ++i) {
    const double x = grid_.x(i);
    const double s = std::sin(pi * x);
    vsec_[i] = -cfg_.A2 * s * s;
    cos2q_[i] = std::cos(2.0 * q1 * x);
    sin2q_[i] = std::sin(2.0 * q1 * x);
  }

  for (int j = 0; j < cfg_.n; ++j) wells_.push_back(grid_.x0 + 0.5 + j);
  atoms_ = {-0.5, 0.5};
  for (double w : wells_)
    if (w != -0.5 && w != 0.5) atoms_.push_back(w);

  const double er1 = recoil_energy(sp_, cfg_.lambda1);
  const double nu_t =
      2.0 * (er1 / h_planck) * std::sqrt(cfg_.transverse_depth);
  const InteractionSpec is{sp_.scattering_length, nu_t, nu_t};
  g_nat_ = is.g1d() / (er2_ * 0.5 * l2);
}

double MergeProblem::er2_rad() const { return er2_ / hbar; }

double MergeProblem::tau_nat(double tau_s) const { return tau_s * er2_rad(); }

void MergeProblem::fill_potential(double a1, double phi,
                                  std::vector<double>& v) const {
  // -a1 cos^2(q1 x + phi) = -a1/2 - a1/2 [cos(2q1x)cos(2phi) - sin(2q1x)sin(2phi)]
  const double a = std::max(a1, 0.0);
  const double c2 = 0.5 * a * std::cos(2.0 * phi);
  const double s2 = 0.5 * a * std::sin(2.0 * phi);
  const double base = -0.5 * a;
  const int np = grid_.npoints;
  v.resize(np);
  for (int i = 0; i < np; ++i)
    v[i] = base - c2 * cos2q_[i] + s2 * sin2q_[i] + vsec_[i];
}

FidelityReport MergeProblem::evaluate(const ControlPulse& pulse,
                                      bool with_neighbors) const {
  FidelityReport rep;
  try {
    pulse.validate();
    const double tau = pulse.tau();
    if (!(tau > 0)) throw std::invalid_argument("pulse duration must be > 0");
    const double steps_d = std::ceil(tau / cfg_.dt);
    if (steps_d > 2e7) throw std::invalid_argument(
        "pulse duration implausibly long (expected natural units)");
    const int steps = static_cast<int>(steps_d);
    const Pchip fa = pulse.A1_curve();
    const Pchip fp = pulse.phi_curve();

    std::vector<double> v0;
    fill_potential(fa(0.0), fp(0.0), v0);
    const EigenStates doublet =
        window_eigenstates(grid_, v0, 0.0, 1.0, 2, 1.0, kMassNat);
    rep.pair_split = doublet.energies[1] - doublet.energies[0];

    const size_t natoms = with_neighbors ? atoms_.size() : 2;
    std::vector<Wavefunction> batch;
    for (size_t a = 0; a < natoms; ++a)
      batch.push_back(window_eigenstates(grid_, v0, atoms_[a], 1.0, 1, 1.0,
                                         kMassNat)
                          .states[0]);

    PropagationSettings ps;
    ps.hbar = 1.0;
    ps.mass = kMassNat;
    ps.t0 = 0.0;
    ps.steps = steps;
    ps.dt = tau / steps;
    ps.record_stride = cfg_.record_stride;
    const PotentialFill vf = [&](double t, std::vector<double>& v) {
      fill_potential(fa(t), fp(t), v);
    };
    const RecordSink sink = [&](double t,
                                const std::vector<Wavefunction>& b) {
      rep.record_t.push_back(t);
      rep.record_overlap.push_back(density_overlap(b[0], b[1]));
    };
    split_step(batch, vf, ps, sink);

    std::vector<double> vfin;
    fill_potential(fa(tau), fp(tau), vfin);
    // merged well: deepest point within the pair's original territory
    int imin = -1;
    for (int i = 0; i < grid_.npoints; ++i)
      if (std::abs(grid_.x(i)) < 1.0 &&
          (imin < 0 || vfin[i] < vfin[imin]))
        imin = i;
    const auto [bl, br] = basin_window(grid_, vfin, grid_.x(imin));
    const EigenStates merged = window_eigenstates(
        grid_, vfin, 0.5 * (bl + br), 0.5 * (br - bl), 2, 1.0, kMassNat);
    rep.pg = std::norm(merged.states[0].overlap(batch[0]));
    rep.pe = std::norm(merged.states[1].overlap(batch[1]));
    rep.hold_overlap =
        density_overlap(merged.states[0], merged.states[1]);
    rep.f_target = rep.pg * rep.pe;
    rep.f_all = rep.f_target;
    if (with_neighbors) {
      for (size_t a = 2; a < natoms; ++a) {
        const Wavefunction gn = basin_ground(grid_, vfin, atoms_[a]);
        rep.f_all *= std::norm(gn.overlap(batch[a]));
      }
    }
    rep.valid = true;
  } catch (const std::exception& e) {
    rep.valid = false;
    rep.diagnostic = e.what();
  }
  return rep;
}

double MergeProblem::fidelity_error(const ControlPulse& pulse) const {
  const double ea[3] = {-cfg_.box.amp_frac, 0.0, cfg_.box.amp_frac};
  const double ep[3] = {-cfg_.box.phase_offset, 0.0, cfg_.box.phase_offset};
  std::vector<double> f(9, 0.0);
  parallel_for(9, [&](int k) {
    const ControlPulse q = apply_pulse_errors(pulse, ea[k / 3], ep[k % 3]);
    const FidelityReport r = evaluate(q, true);
    f[k] = r.valid ? r.f_all : 0.0;
  });
  return *std::min_element(f.begin(), f.end());
}

double MergeProblem::reversal_overlap(const ControlPulse& pulse) const {
  pulse.validate();
  const double tau = pulse.tau();
  const Pchip fa = pulse.A1_curve();
  const Pchip fp = pulse.phi_curve();

  std::vector<double> v0;
  fill_potential(fa(0.0), fp(0.0), v0);
  std::vector<Wavefunction> batch;
  for (size_t a = 0; a < 2; ++a)
    batch.push_back(
        window_eigenstates(grid_, v0, atoms_[a], 1.0, 1, 1.0, kMassNat)
            .states[0]);
  const std::vector<Wavefunction> initial = batch;

  PropagationSettings ps;
  ps.hbar = 1.0;
  ps.mass = kMassNat;
  ps.steps = static_cast<int>(std::ceil(tau / cfg_.dt));
  ps.dt = tau / ps.steps;
  split_step(batch, [&](double t, std::vector<double>& v) {
    fill_potential(fa(t), fp(t), v);
  }, ps);

  // motion reversal: momenta flip at the turning point (conjugation), then
  // the control curves run backwards
  for (auto& w : batch)
    for (auto& a : w.amp) a = std::conj(a);
  split_step(batch, [&](double t, std::vector<double>& v) {
    fill_potential(fa(tau - t), fp(tau - t), v);
  }, ps);

  double f = 1.0;
  for (size_t a = 0; a < 2; ++a)
    f *= std::norm(initial[a].overlap(batch[a]));
  return f;
}

ControlPulse MergeProblem::seed_pulse(double tau_natural, int interior_knots,
                                      double final_depth,
                                      double phase_bias) const {
  if (!(tau_natural > 0) || interior_knots < 1)
    throw std::invalid_argument("seed requires tau > 0 and >= 1 interior knot");
  const int K = interior_knots + 2;
  ControlPulse p;
  for (int i = 0; i < K; ++i) {
    const double u = static_cast<double>(i) / (K - 1);
    p.t.push_back(u * tau_natural);
    p.A1.push_back(final_depth * smoothstep5(u));
    p.phi.push_back(phase_bias);
  }
  return p;
}

double MergeProblem::objective_value(const ControlPulse& pulse,
                                     Objective obj) const {
  if (obj != Objective::robust) {
    const FidelityReport r = evaluate(pulse, obj != Objective::target);
    if (!r.valid) return -1.0;
    if (r.pair_split > cfg_.pair_split_limit) return -r.pair_split;
    return obj == Objective::target ? r.f_target : r.f_all;
  }
  // Worst f_all over the box centre and its four corners.  The box minimum
  // almost always sits at a corner (phase extremes dominate), so these five
  // points track the full 3x3 minimum at a fraction of its cost.  Reported
  // robustness (fidelity_error) stays the strict minimum over the full box.
  const double ea = cfg_.box.amp_frac, ep = cfg_.box.phase_offset;
  const double shifts[5][2] = {
      {0.0, 0.0}, {-ea, -ep}, {-ea, ep}, {ea, -ep}, {ea, ep}};
  std::vector<FidelityReport> f(5);
  parallel_for(5, [&](int k) {
    f[k] = evaluate(apply_pulse_errors(pulse, shifts[k][0], shifts[k][1]), true);
  });
  double worst = 1.0;
  for (const FidelityReport& r : f) {
    if (!r.valid) return -1.0;
    if (r.pair_split > cfg_.pair_split_limit) return -r.pair_split;
    worst = std::min(worst, r.f_all);
  }
  return worst;
}

ControlPulse MergeProblem::optimize(const ControlPulse& seed, Objective obj,
                                    const NelderMeadOptions& nm_in) const {
  seed.validate();
  const size_t K = seed.t.size();
  // free parameters: depth knots 1..K-1 (knot 0 pinned), all phase knots
  std::vector<double> x0;
  for (size_t i = 1; i < K; ++i) x0.push_back(seed.A1[i]);
  for (size_t i = 0; i < K; ++i) x0.push_back(seed.phi[i]);

  auto unpack = [&](const std::vector<double>& p) {
    ControlPulse q;
    q.t = seed.t;
    q.A1.resize(K);
    q.phi.resize(K);
    q.A1[0] = seed.A1[0];
    for (size_t i = 1; i < K; ++i) q.A1[i] = std::max(p[i - 1], 0.0);
    for (size_t i = 0; i < K; ++i) q.phi[i] = p[K - 1 + i];
    return q;
  };

  NelderMeadOptions nm = nm_in;
  if (nm.initial_step.empty()) {
    nm.initial_step.assign(2 * K - 1, 1.5);
    for (size_t i = K - 1; i < 2 * K - 1; ++i) nm.initial_step[i] = 0.03;
  }
  if (nm.initial_step.size() != 2 * K - 1)
    throw std::invalid_argument("initial_step size mismatch");

  // penalties (negative objective values) map to cost > 1
  const auto cost = [&](const std::vector<double>& p) {
    return 1.0 - objective_value(unpack(p), obj);
  };
  const NelderMeadResult res = nelder_mead(cost, x0, nm);
  return unpack(res.x);
}

std::vector<double> MergeProblem::error_landscape(const ControlPulse& pulse,
                                                  double amp_half,
                                                  double phase_half, int na,
                                                  int np) const {
  if (na < 1 || np < 1)
    throw std::invalid_argument("landscape grid must be >= 1x1");
  std::vector<double> out(static_cast<size_t>(na) * np, 0.0);
  parallel_for(na * np, [&](int k) {
    const int i = k / np, j = k % np;
    const double ea =
        (na == 1) ? 0.0 : -amp_half + 2.0 * amp_half * i / (na - 1);
    const double ep =
        (np == 1) ? 0.0 : -phase_half + 2.0 * phase_half * j / (np - 1);
    const FidelityReport r = evaluate(apply_pulse_errors(pulse, ea, ep), true);
    out[k] = r.valid ? r.f_all : 0.0;
  });
  return out;
}

GateReport MergeProblem::report(const ControlPulse& pulse) const {
  const FidelityReport r = evaluate(pulse, true);
  if (!r.valid)
    throw std::runtime_error("cannot report a degenerate pulse: " +
                             r.diagnostic);
  GateReport g;
  g.pulse = pulse;
  g.tau_nat = pulse.tau();
  g.tau_s = g.tau_nat / er2_rad();
  g.f_target = r.f_target;
  g.f_all = r.f_all;
  g.f_error = fidelity_error(pulse);

  std::vector<double> u(r.record_overlap.size());
  for (size_t i = 0; i < u.size(); ++i)
    u[i] = 2.0 * g_nat_ * r.record_overlap[i];
  g.merge_phase = accumulated_phase(r.record_t, u, 1.0);
  g.u_int_hold = 2.0 * g_nat_ * r.hold_overlap * er2_;

  const double u_rad = g.u_int_hold / hbar;
  g.swap = assemble_gate_times(g.merge_phase, u_rad, g.tau_s, pi);
  g.sqrt_swap = assemble_gate_times(g.merge_phase, u_rad, g.tau_s, 0.5 * pi);

  const Pchip fa = pulse.A1_curve();
  double a1bar = 0.0;
  const int ns = 200;
  for (int i = 0; i < ns; ++i)
    a1bar += fa(g.tau_nat * i / (ns - 1.0));
  a1bar /= ns;
  g.p_sc_swap = gate_scattering(sp_, cfg_, a1bar, g.swap.total);
  g.p_sc_sqrt_swap = gate_scattering(sp_, cfg_, a1bar, g.sqrt_swap.total);
  return g;
}

double merge_fidelity_target(const MergeProblem& mp, const ControlPulse& p) {
  return mp.evaluate(p, false).f_target;
}

double merge_fidelity_all(const MergeProblem& mp, const ControlPulse& p) {
  return mp.evaluate(p, true).f_all;
}

double merge_fidelity_error(const MergeProblem& mp, const ControlPulse& p) {
  return mp.fidelity_error(p);
}

GateTimes assemble_gate_times(double merge_phase, double u_int_rad,
                              double tau_s, double phase_unit) {
  if (!(u_int_rad > 0) || !(phase_unit > 0) || !(tau_s > 0))
    throw std::invalid_argument(
        "gate assembly requires positive interaction, unit, and duration");
  GateTimes t;
  // odd multiples only: even multiples of pi/2 degenerate to the SWAP
  // phase and even multiples of pi to the identity
  for (t.multiples = 1; t.multiples <= 10001; t.multiples += 2) {
    t.hold = (t.multiples * phase_unit - 2.0 * merge_phase) / u_int_rad;
    if (t.hold >= 0) break;
  }
  if (t.hold < 0)
    throw std::runtime_error("no attainable phase multiple");
  t.total = 2.0 * tau_s + t.hold;
  return t;
}

double gate_scattering(const Species& sp, const MergeConfig& cfg,
                       double a1_mean, double total_s) {
  if (!(total_s > 0) || a1_mean < 0)
    throw std::invalid_argument("scattering needs total_s > 0, a1_mean >= 0");
  const double er1 = recoil_energy(sp, cfg.lambda1);
  const double er2 = recoil_energy(sp, cfg.lambda2());
  const double rho1 = scattering_per_depth(sp, sp.state0(), cfg.lambda1, 1.0);
  const double rho2 =
      scattering_per_depth(sp, sp.state0(), cfg.lambda2(), 1.0);
  // intensity occupancy: localized atoms sample ~93% of their confining
  // beam's peak; the moving primary lattice averages cos^2 ~ 1/2
  const double peak = 0.93, homog = 0.5;
  const double per_atom = rho2 * (cfg.A2 * er2) * peak +
                          rho1 * (a1_mean * er2) * homog +
                          2.0 * rho1 * (cfg.transverse_depth * er1) * peak;
  return 1.0 - std::exp(-cfg.n * per_atom * total_s);
}

double frequency_to_phase(double delta_nu, double path_m) {
  return two_pi * delta_nu * path_m / c_light;
}

void SweepSettings::validate() const {
  if (taus_us.empty())
    throw std::invalid_argument("sweep requires at least one duration");
  for (size_t i = 0; i < taus_us.size(); ++i) {
    if (!(taus_us[i] > 0))
      throw std::invalid_argument("durations must be positive");
    if (i > 0 && !(taus_us[i] > taus_us[i - 1]))
      throw std::invalid_argument("durations must strictly increase");
  }
  if (interior_knots < 1 || max_evals_cold < 10 || max_evals_warm < 10 ||
      polish_evals < 0 || polish_count < 0)
    throw std::invalid_argument("invalid sweep budgets");
  if (!(step_depth > 0) || !(step_phase > 0) || !(warm_step_scale > 0))
    throw std::invalid_argument("invalid simplex steps");
}

namespace {

ControlPulse rescale_pulse(const ControlPulse& p, double new_tau) {
  ControlPulse q = p;
  const double scale = new_tau / p.tau();
  for (double& t : q.t) t *= scale;
  q.t.front() = 0.0;
  q.t.back() = new_tau;
  return q;
}

}  // namespace

std::vector<SweepPoint> continuation_sweep(const MergeProblem& mp,
                                           const SweepSettings& s) {
  s.validate();
  const int T = static_cast<int>(s.taus_us.size());
  std::vector<ControlPulse> best(T);
  std::vector<double> best_f(T, -2.0);

  auto nm_options = [&](size_t knots, int evals, double scale) {
    NelderMeadOptions nm;
    nm.max_evals = evals;  // total across restarts
    nm.restarts = 3;
    nm.diameter_tol = 1e-6;
    nm.initial_step.assign(2 * knots - 1, s.step_depth * scale);
    for (size_t i = knots - 1; i < 2 * knots - 1; ++i)
      nm.initial_step[i] = s.step_phase * scale;
    return nm;
  };
  auto run = [&](int i, const ControlPulse& seed, int evals, double scale) {
    const ControlPulse p =
        mp.optimize(seed, s.sweep_objective, nm_options(seed.t.size(), evals, scale));
    const double f = merge_fidelity_all(mp, p);
    if (f > best_f[i]) {
      best_f[i] = f;
      best[i] = p;
    }
  };

  for (int i = T - 1; i >= 0; --i) {
    const double tau = mp.tau_nat(s.taus_us[i] * 1e-6);
    if (i == T - 1) {
      run(i, mp.seed_pulse(tau, s.interior_knots, s.seed_final_depth,
                           s.seed_phase_bias),
          s.max_evals_cold, 1.0);
    } else {
      run(i, rescale_pulse(best[i + 1], tau), s.max_evals_warm,
          s.warm_step_scale);
    }
  }
  for (int i = 1; i < T; ++i)
    run(i, rescale_pulse(best[i - 1], mp.tau_nat(s.taus_us[i] * 1e-6)),
        s.max_evals_warm, s.warm_step_scale);

  std::vector<SweepPoint> pts(T);
  for (int i = 0; i < T; ++i) {
    pts[i].tau_us = s.taus_us[i];
    pts[i].report = mp.report(best[i]);
  }

  // robustness polish on the most promising points
  if (s.polish_count > 0 && s.polish_evals > 0) {
    std::vector<int> order(T);
    for (int i = 0; i < T; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return pts[a].report.f_error > pts[b].report.f_error;
    });
    const int npol = std::min(s.polish_count, T);
    for (int k = 0; k < npol; ++k) {
      const int i = order[k];
      const ControlPulse polished =
          mp.optimize(best[i], Objective::robust,
                      nm_options(best[i].t.size(), s.polish_evals,
                                 0.25 * s.warm_step_scale));
      GateReport rep = mp.report(polished);
      if (rep.f_error > pts[i].report.f_error) pts[i].report = std::move(rep);
    }
  }
  return pts;
}

}  // namespace slgate
