#include "slgate/runconfig.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "slgate/artifacts.hpp"
#include "slgate/atomphys.hpp"
#include "slgate/constants.hpp"

namespace slgate {

using nlohmann::json;
using namespace constants;

namespace {

class Collector {
 public:
  explicit Collector(std::string origin) : origin_(std::move(origin)) {}

  void add(const std::string& msg) { errors_.push_back(msg); }

  template <typename T>
  T number(const json& j, const std::string& ctx, const std::string& key,
           T fallback, bool required = false) {
    if (!j.contains(key)) {
      if (required) add(ctx + "." + key + " is required");
      return fallback;
    }
    if (!j.at(key).is_number()) {
      add(ctx + "." + key + " must be a number");
      return fallback;
    }
    return j.at(key).get<T>();
  }

  void finish() const {
    if (errors_.empty()) return;
    std::ostringstream msg;
    msg << "invalid run config " << origin_ << ":";
    for (const auto& e : errors_) msg << "\n  - " << e;
    throw ConfigError(msg.str());
  }

 private:
  std::string origin_;
  std::vector<std::string> errors_;
};

ScanAxis parse_axis(Collector& c, const json& j, const std::string& ctx,
                    double unit) {
  ScanAxis ax;
  if (!j.is_object()) {
    c.add(ctx + " must be an object {lo, hi, count}");
    return ax;
  }
  ax.lo = c.number<double>(j, ctx, "lo", 0.0, true) * unit;
  ax.hi = c.number<double>(j, ctx, "hi", 0.0, true) * unit;
  ax.count = c.number<int>(j, ctx, "count", 0, true);
  try {
    ax.validate();
  } catch (const std::exception& e) {
    c.add(ctx + ": " + e.what());
  }
  return ax;
}

Objective parse_objective(Collector& c, const json& j, const std::string& ctx) {
  const std::string s = j.value("objective", std::string("target"));
  if (s == "target") return Objective::target;
  if (s == "all") return Objective::all;
  if (s == "robust") return Objective::robust;
  c.add(ctx + ".objective must be one of target|all|robust");
  return Objective::target;
}

}  // namespace

RunConfig parse_run_config(const std::string& text,
                           const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError("malformed JSON in " + origin + ": " + e.what());
  }
  Collector c(origin);
  RunConfig rc;

  rc.schema_version = c.number<int>(j, "config", "schema_version", 1);
  if (rc.schema_version != 1)
    c.add("config.schema_version: only version 1 is supported");
  if (j.contains("species") && j.at("species").is_string())
    rc.species_path = j.at("species").get<std::string>();
  else
    c.add("config.species (path string) is required");
  rc.output_dir = j.value("output_dir", std::string("out"));
  rc.seed = c.number<long>(j, "config", "seed", 0);

  // ---- superlattice ----
  if (j.contains("superlattice")) {
    const json& sl = j.at("superlattice");
    auto& L = rc.lattice;
    L.lambda1 = c.number<double>(sl, "superlattice", "lambda1_nm",
                                 L.lambda1 * 1e9, true) * 1e-9;
    const bool has_n = sl.contains("n");
    const bool has_l2 = sl.contains("lambda2_nm");
    if (has_n == has_l2) {
      c.add("superlattice: exactly one of n or lambda2_nm is required");
    } else if (has_n) {
      const int n = c.number<int>(sl, "superlattice", "n", 0, true);
      if (n < 2) {
        c.add("superlattice.n must be >= 2");
      } else {
        rc.lattice_n = n;
        L.lambda2 = wavelength_for_cycles(L.lambda1, n);
      }
    } else {
      L.lambda2 =
          c.number<double>(sl, "superlattice", "lambda2_nm", 0.0, true) * 1e-9;
    }
    L.eta = c.number<double>(sl, "superlattice", "eta", L.eta);
    L.A = c.number<double>(sl, "superlattice", "A", L.A);
    L.polarization =
        c.number<double>(sl, "superlattice", "polarization", L.polarization);
    L.phi1 = c.number<double>(sl, "superlattice", "phi1", L.phi1);
    L.phi2 = c.number<double>(sl, "superlattice", "phi2", L.phi2);
    try {
      L.validate();
    } catch (const std::exception& e) {
      c.add(std::string("superlattice: ") + e.what());
    }
  }

  // ---- addressing ----
  if (j.contains("addressing")) {
    const json& ad = j.at("addressing");
    rc.addressing.present = true;
    rc.addressing.threshold.P_t =
        c.number<double>(ad, "addressing", "P_t", 0.01);
    try {
      rc.addressing.threshold.validate();
    } catch (const std::exception& e) {
      c.add(std::string("addressing.P_t: ") + e.what());
    }
    if (ad.contains("lambda2_nm"))
      rc.addressing.lambda2 =
          parse_axis(c, ad.at("lambda2_nm"), "addressing.lambda2_nm", 1e-9);
    else
      c.add("addressing.lambda2_nm axis is required");
    if (ad.contains("A"))
      rc.addressing.A = parse_axis(c, ad.at("A"), "addressing.A", 1.0);
    else
      c.add("addressing.A axis is required");
  }

  // ---- merge ----
  if (j.contains("merge")) {
    const json& mg = j.at("merge");
    rc.merge.present = true;
    MergeConfig& m = rc.merge.cfg;
    m.n = c.number<int>(mg, "merge", "n", m.n);
    m.lambda1 = c.number<double>(mg, "merge", "lambda1_nm",
                                 m.lambda1 * 1e9) * 1e-9;
    m.A2 = c.number<double>(mg, "merge", "A2", m.A2);
    if (mg.contains("nu_y_hz") || mg.contains("nu_z_hz")) {
      if (mg.contains("transverse_depth"))
        c.add("merge: give either transverse_depth or nu_y_hz/nu_z_hz, "
              "not both");
      const double ny = c.number<double>(mg, "merge", "nu_y_hz", 0.0, true);
      const double nz = c.number<double>(mg, "merge", "nu_z_hz", 0.0, true);
      if (ny > 0 && nz > 0) {
        rc.merge.nu_y_hz = ny;
        rc.merge.nu_z_hz = nz;
      } else {
        c.add("merge.nu_y_hz and merge.nu_z_hz must both be positive");
      }
    } else {
      m.transverse_depth = c.number<double>(mg, "merge", "transverse_depth",
                                            m.transverse_depth);
    }
    m.grid_points = c.number<int>(mg, "merge", "grid_points", m.grid_points);
    m.dt = c.number<double>(mg, "merge", "dt", m.dt);
    m.record_stride =
        c.number<int>(mg, "merge", "record_stride", m.record_stride);
    m.pair_split_limit = c.number<double>(mg, "merge", "pair_split_limit",
                                          m.pair_split_limit);
    if (mg.contains("error_box")) {
      const json& eb = mg.at("error_box");
      m.box.amp_frac =
          c.number<double>(eb, "merge.error_box", "amp_percent", 0.1) * 1e-2;
      m.box.phase_offset =
          c.number<double>(eb, "merge.error_box", "phase_percent_pi", 0.2) *
          1e-2 * pi;
    }
    try {
      m.validate();
    } catch (const std::exception& e) {
      c.add(std::string("merge: ") + e.what());
    }

    SweepSettings& sw = rc.merge.sweep;
    if (mg.contains("tau_us")) {
      const json& t = mg.at("tau_us");
      if (t.is_number()) {
        sw.taus_us = {t.get<double>()};
      } else if (t.is_array()) {
        for (const auto& v : t) {
          if (v.is_number())
            sw.taus_us.push_back(v.get<double>());
          else
            c.add("merge.tau_us entries must be numbers");
        }
      } else {
        c.add("merge.tau_us must be a number or an array");
      }
    } else {
      c.add("merge.tau_us is required");
    }
    sw.interior_knots = c.number<int>(mg, "merge", "knots", sw.interior_knots);
    sw.seed_final_depth =
        c.number<double>(mg, "merge", "seed_final_depth", sw.seed_final_depth);
    sw.seed_phase_bias =
        c.number<double>(mg, "merge", "seed_phase_bias_pi",
                         sw.seed_phase_bias / pi) * pi;
    sw.sweep_objective = parse_objective(c, mg, "merge");
    if (mg.contains("budgets")) {
      const json& b = mg.at("budgets");
      sw.max_evals_cold = c.number<int>(b, "merge.budgets", "cold",
                                        sw.max_evals_cold);
      sw.max_evals_warm = c.number<int>(b, "merge.budgets", "warm",
                                        sw.max_evals_warm);
      sw.polish_evals = c.number<int>(b, "merge.budgets", "polish",
                                      sw.polish_evals);
      sw.polish_count = c.number<int>(b, "merge.budgets", "polish_count",
                                      sw.polish_count);
    }
    try {
      sw.validate();
    } catch (const std::exception& e) {
      c.add(std::string("merge sweep: ") + e.what());
    }
  }

  if (!rc.addressing.present && !rc.merge.present)
    c.add("config must contain an addressing or merge section");

  c.finish();
  rc.canonical = j.dump();
  rc.config_hash = io::hash_hex(io::fnv1a64(rc.canonical));
  return rc;
}

void MergeBlock::resolve_transverse(const Species& sp) {
  if (!nu_y_hz || !nu_z_hz) return;
  const double er1_hz =
      recoil_energy(sp, cfg.lambda1) / constants::h_planck;
  const double nu_t = std::sqrt(*nu_y_hz * *nu_z_hz);
  cfg.transverse_depth = std::pow(nu_t / (2.0 * er1_hz), 2);
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path);
}

}  // namespace slgate
