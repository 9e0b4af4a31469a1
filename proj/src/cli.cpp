#include "slgate/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "slgate/artifacts.hpp"
#include "slgate/atomphys.hpp"
#include "slgate/constants.hpp"

namespace slgate::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace constants;

std::string apply_overrides(const std::string& config_text,
                            const std::vector<std::string>& sets) {
  if (sets.empty()) return config_text;
  json j;
  try {
    j = json::parse(config_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("malformed JSON config: ") + e.what());
  }
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("override must look like dotted.path=value: '" + s +
                        "'");
    const std::string path = s.substr(0, eq);
    const std::string raw = s.substr(eq + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (...) {
      value = raw;  // unquoted strings pass through verbatim
    }
    json* node = &j;
    std::istringstream ps(path);
    std::string key, next;
    std::getline(ps, key, '.');
    while (std::getline(ps, next, '.')) {
      if (!node->is_object())
        throw ConfigError("override path crosses a non-object: '" + path +
                          "'");
      node = &(*node)[key];
      key = next;
    }
    if (!node->is_object())
      throw ConfigError("override path crosses a non-object: '" + path + "'");
    (*node)[key] = value;
  }
  return j.dump();
}

namespace {

std::string tau_tag(double tau_us) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", tau_us);
  std::string tag(buf);
  for (char& ch : tag)
    if (ch == '.') ch = 'p';
  return tag;
}

void emit_error(std::ostream& err, const std::string& output_dir,
                const std::string& kind, const std::string& message) {
  const std::string doc = io::error_json(kind, message);
  err << doc;
  if (output_dir.empty()) return;
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) return;
  try {
    io::write_text((fs::path(output_dir) / "error.json").string(), doc);
  } catch (...) {
    // the stream copy above already carries the report
  }
}

}  // namespace

int cmd_validate(const RunConfig& rc, std::ostream& out) {
  const Species sp = load_species(rc.species_path);
  const auto& L = rc.lattice;
  const double er1 = recoil_energy(sp, L.lambda1);
  const double er2 = recoil_energy(sp, L.lambda2);
  const WellScan scan = find_wells(sp, L);

  out << "config_hash " << rc.config_hash << "\n";
  out << "species " << sp.name << "\n";
  out << "lambda1_nm " << io::format17(L.lambda1 * 1e9) << "\n";
  out << "lambda2_nm " << io::format17(L.lambda2 * 1e9) << "\n";
  out << "a_SLP_nm " << io::format17(slp_length(L.lambda1, L.lambda2) * 1e9)
      << "\n";
  if (scan.cycles) out << "n " << *scan.cycles << "\n";
  out << "wells_per_period " << scan.wells.size() << "\n";
  out << "Er_lambda1_over_h_Hz " << io::format17(er1 / h_planck) << "\n";
  out << "Er_lambda2_over_h_Hz " << io::format17(er2 / h_planck) << "\n";

  if (rc.addressing.present) {
    // probe the scan-grid corners so domain faults surface before a long run
    for (int i : {0, rc.addressing.lambda2.count - 1}) {
      for (int k : {0, rc.addressing.A.count - 1}) {
        SuperlatticeConfig probe = L;
        probe.lambda2 = rc.addressing.lambda2.at(i);
        probe.A = rc.addressing.A.at(k);
        evaluate_addressing(sp, probe, rc.addressing.threshold);
      }
    }
    out << "addressing_grid " << rc.addressing.lambda2.count << "x"
        << rc.addressing.A.count << "\n";
  }

  if (rc.merge.present) {
    MergeBlock mb = rc.merge;
    mb.resolve_transverse(sp);
    const MergeProblem mp(sp, mb.cfg);
    const double nu_t = 2.0 *
                        (recoil_energy(sp, mb.cfg.lambda1) / h_planck) *
                        std::sqrt(mb.cfg.transverse_depth);
    const InteractionSpec is{sp.scattering_length, nu_t, nu_t};
    out << "merge_n " << mb.cfg.n << "\n";
    out << "transverse_depth_Er1 " << io::format17(mb.cfg.transverse_depth)
        << "\n";
    out << "nu_t_Hz " << io::format17(nu_t) << "\n";
    out << "g1d_Jm " << io::format17(is.g1d()) << "\n";
    out << "g_natural " << io::format17(mp.g_natural()) << "\n";
  }
  out << "ok\n";
  return kExitOk;
}

int cmd_scan(const RunConfig& rc, std::ostream& out) {
  if (!rc.addressing.present)
    throw ConfigError("scan requires an addressing section");
  const Species sp = load_species(rc.species_path);
  const auto& ab = rc.addressing;
  const auto cells = scan_map(sp, rc.lattice, ab.lambda2, ab.A, ab.threshold);

  const double eta_er1 = rc.lattice.eta * recoil_energy(sp, rc.lattice.lambda1);
  std::vector<io::ScanRow> rows(cells.size());
  for (size_t i = 0; i < cells.size(); ++i) {
    rows[i] = {cells[i].lambda2 * 1e9, cells[i].A,
               cells[i].min_detuning / eta_er1, cells[i].gate_time_s,
               cells[i].success};
  }
  const fs::path dir(rc.output_dir);
  io::write_scan_csv((dir / "scan.csv").string(), rows, rc.config_hash);
  io::write_scan_summary((dir / "scan_summary.json").string(), rows,
                         rc.config_hash);

  size_t best = 0;
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i].success_probability > rows[best].success_probability) best = i;
  out << "scan: " << rows.size() << " cells, max success "
      << io::format17(rows[best].success_probability) << " at lambda2 "
      << rows[best].lambda2_nm << " nm, A " << rows[best].A << "\n";
  out << "wrote " << (dir / "scan.csv").string() << "\n";
  return kExitOk;
}

int cmd_merge(const RunConfig& rc, std::ostream& out) {
  if (!rc.merge.present) throw ConfigError("merge requires a merge section");
  const Species sp = load_species(rc.species_path);
  MergeBlock mb = rc.merge;
  mb.resolve_transverse(sp);
  const MergeProblem mp(sp, mb.cfg);
  const auto points = continuation_sweep(mp, mb.sweep);

  const fs::path dir(rc.output_dir);
  std::vector<io::SweepRow> rows;
  rows.reserve(points.size());
  for (const auto& p : points) {
    rows.push_back(io::sweep_row(p));
    const std::string tag = tau_tag(p.tau_us);

    ControlPulse stored = p.report.pulse;  // knot times to microseconds
    const double to_us = p.report.tau_s / p.report.tau_nat * 1e6;
    for (double& t : stored.t) t *= to_us;
    io::write_pulse((dir / ("pulse_tau" + tag + "us.txt")).string(), stored,
                    rc.config_hash);
    io::write_gate_report((dir / ("gate_tau" + tag + "us.json")).string(),
                          p.report, rc.config_hash);

    out << "tau " << p.tau_us << " us: F_target "
        << io::format17(p.report.f_target) << " F_all "
        << io::format17(p.report.f_all) << " F_error "
        << io::format17(p.report.f_error) << " T_swap_us "
        << io::format17(p.report.swap.total * 1e6) << "\n";
    if (p.report.f_target < 0.5)
      out << "warning: tau " << p.tau_us
          << " us optimization did not converge to a merging pulse\n";
  }
  io::write_sweep_csv((dir / "sweep.csv").string(), rows, rc.config_hash);
  io::write_sweep_summary((dir / "sweep_summary.json").string(), rows,
                          rc.config_hash);
  out << "wrote " << (dir / "sweep.csv").string() << "\n";
  return kExitOk;
}

int cmd_replay(const RunConfig& rc, const std::string& pulse_path,
               std::ostream& out) {
  if (!rc.merge.present) throw ConfigError("replay requires a merge section");
  if (pulse_path.empty()) throw ConfigError("replay requires a pulse file");
  const Species sp = load_species(rc.species_path);
  MergeBlock mb = rc.merge;
  mb.resolve_transverse(sp);
  const MergeProblem mp(sp, mb.cfg);

  const io::PulseFile pf = io::read_pulse(pulse_path);
  if (!pf.config_hash.empty() && pf.config_hash != rc.config_hash)
    out << "warning: pulse was produced under config " << pf.config_hash
        << ", replaying under " << rc.config_hash << "\n";

  ControlPulse nat = pf.pulse;  // stored knot times are microseconds
  const double to_nat = 1e-6 * mp.er2_rad();
  for (double& t : nat.t) t *= to_nat;

  const GateReport rep = mp.report(nat);
  const fs::path dir(rc.output_dir);
  io::write_gate_report((dir / "replay_report.json").string(), rep,
                        rc.config_hash);
  out << "replay: F_target " << io::format17(rep.f_target) << " F_all "
      << io::format17(rep.f_all) << " F_error " << io::format17(rep.f_error)
      << "\n";
  return kExitOk;
}

int dispatch(const std::string& command, const std::string& config_path,
             const std::vector<std::string>& sets,
             const std::string& pulse_path, std::ostream& out,
             std::ostream& err) {
  std::string output_dir;
  try {
    std::string text = io::read_text(config_path);
    text = apply_overrides(text, sets);
    const RunConfig rc = parse_run_config(text, config_path);
    output_dir = rc.output_dir;
    fs::create_directories(rc.output_dir);
    if (command == "validate") return cmd_validate(rc, out);
    if (command == "scan") return cmd_scan(rc, out);
    if (command == "merge") return cmd_merge(rc, out);
    if (command == "replay") return cmd_replay(rc, pulse_path, out);
    throw ConfigError("unknown command: " + command);
  } catch (const ConfigError& e) {
    emit_error(err, output_dir, "config", e.what());
    return kExitConfig;
  } catch (const SpeciesError& e) {
    emit_error(err, output_dir, "species", e.what());
    return kExitConfig;
  } catch (const io::IoError& e) {
    emit_error(err, output_dir, "io", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    emit_error(err, output_dir, "config", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    emit_error(err, output_dir, "numerical", e.what());
    return kExitNumeric;
  }
}

}  // namespace slgate::cli
