#include "slgate/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "slgate/constants.hpp"

namespace slgate::io {

using nlohmann::json;

const char kScanCsvHeader[] =
    "lambda2_nm,A,detuning_over_etaEr,gate_time_s_at_eta,success_probability";
const char kSweepCsvHeader[] =
    "tau_us,F_target,F_all,F_error,T_swap_us,T_sqrtswap_us,P_sc_swap,"
    "P_sc_sqrtswap";

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse17(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw IoError("not a number: '" + s + "'");
  return v;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

// Shared CSV scaffold: "# config_hash ..." comment, fixed header, rows.
template <typename Row, typename ToCells>
void write_csv(const std::string& path, const char* header,
               const std::vector<Row>& rows, const std::string& config_hash,
               ToCells to_cells) {
  std::ostringstream out;
  out << "# config_hash " << config_hash << "\n" << header << "\n";
  for (const Row& r : rows) {
    const auto cells = to_cells(r);
    for (size_t i = 0; i < cells.size(); ++i)
      out << (i ? "," : "") << format17(cells[i]);
    out << "\n";
  }
  write_text(path, out.str());
}

template <typename Row, typename FromCells>
std::vector<Row> read_csv(const std::string& path, const char* header,
                          size_t ncols, std::string* config_hash,
                          FromCells from_cells) {
  std::istringstream in(read_text(path));
  std::vector<Row> rows;
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# config_hash ", 0) == 0) {
      if (config_hash) *config_hash = line.substr(14);
      continue;
    }
    if (line[0] == '#') continue;
    if (!seen_header) {
      if (line != header)
        throw IoError(path + ": unexpected CSV header '" + line + "'");
      seen_header = true;
      continue;
    }
    const auto cells = split_csv(line);
    if (cells.size() != ncols)
      throw IoError(path + ": expected " + std::to_string(ncols) +
                    " columns, got " + std::to_string(cells.size()));
    std::vector<double> vals(ncols);
    for (size_t i = 0; i < ncols; ++i) vals[i] = parse17(cells[i]);
    rows.push_back(from_cells(vals));
  }
  if (!seen_header) throw IoError(path + ": missing CSV header");
  return rows;
}

}  // namespace

void write_scan_csv(const std::string& path, const std::vector<ScanRow>& rows,
                    const std::string& config_hash) {
  write_csv(path, kScanCsvHeader, rows, config_hash,
            [](const ScanRow& r) -> std::vector<double> {
              return {r.lambda2_nm, r.A, r.detuning_over_etaEr,
                      r.gate_time_s_at_eta, r.success_probability};
            });
}

std::vector<ScanRow> read_scan_csv(const std::string& path,
                                   std::string* config_hash) {
  return read_csv<ScanRow>(
      path, kScanCsvHeader, 5, config_hash,
      [](const std::vector<double>& v) {
        return ScanRow{v[0], v[1], v[2], v[3], v[4]};
      });
}

void write_scan_summary(const std::string& path,
                        const std::vector<ScanRow>& rows,
                        const std::string& config_hash) {
  if (rows.empty()) throw IoError("scan summary of empty map");
  size_t best = 0;
  for (size_t i = 1; i < rows.size(); ++i)
    if (rows[i].success_probability > rows[best].success_probability)
      best = i;
  const ScanRow& b = rows[best];
  json s = {
      {"schema_version", 1},
      {"config_hash", config_hash},
      {"cells", rows.size()},
      {"max_success_probability", b.success_probability},
      {"argmax",
       {{"lambda2_nm", b.lambda2_nm},
        {"A", b.A},
        {"detuning_over_etaEr", b.detuning_over_etaEr},
        {"gate_time_s_at_eta", b.gate_time_s_at_eta},
        {"success_probability", b.success_probability}}},
  };
  write_text(path, s.dump(2) + "\n");
}

SweepRow sweep_row(const SweepPoint& p) {
  SweepRow r;
  r.tau_us = p.tau_us;
  r.f_target = p.report.f_target;
  r.f_all = p.report.f_all;
  r.f_error = p.report.f_error;
  r.t_swap_us = p.report.swap.total * 1e6;
  r.t_sqrtswap_us = p.report.sqrt_swap.total * 1e6;
  r.p_sc_swap = p.report.p_sc_swap;
  r.p_sc_sqrtswap = p.report.p_sc_sqrt_swap;
  return r;
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows,
                     const std::string& config_hash) {
  write_csv(path, kSweepCsvHeader, rows, config_hash,
            [](const SweepRow& r) -> std::vector<double> {
              return {r.tau_us, r.f_target, r.f_all, r.f_error, r.t_swap_us,
                      r.t_sqrtswap_us, r.p_sc_swap, r.p_sc_sqrtswap};
            });
}

std::vector<SweepRow> read_sweep_csv(const std::string& path,
                                     std::string* config_hash) {
  return read_csv<SweepRow>(
      path, kSweepCsvHeader, 8, config_hash,
      [](const std::vector<double>& v) {
        return SweepRow{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
      });
}

void write_sweep_summary(const std::string& path,
                         const std::vector<SweepRow>& rows,
                         const std::string& config_hash) {
  if (rows.empty()) throw IoError("sweep summary of empty series");
  size_t be = 0, ba = 0;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].f_error > rows[be].f_error) be = i;
    if (rows[i].f_all > rows[ba].f_all) ba = i;
  }
  json s = {
      {"schema_version", 1},
      {"config_hash", config_hash},
      {"points", rows.size()},
      {"best_f_error", {{"tau_us", rows[be].tau_us},
                        {"F_error", rows[be].f_error}}},
      {"best_f_all", {{"tau_us", rows[ba].tau_us},
                      {"F_all", rows[ba].f_all}}},
  };
  write_text(path, s.dump(2) + "\n");
}

void write_pulse(const std::string& path, const ControlPulse& pulse,
                 const std::string& config_hash) {
  pulse.validate();
  std::ostringstream out;
  out << "# slgate pulse v1\n"
      << "# config_hash " << config_hash << "\n"
      << "# interpolation pchip\n"
      << "# tau " << format17(pulse.tau()) << "\n"
      << "# columns t A1 phi\n";
  for (size_t i = 0; i < pulse.t.size(); ++i)
    out << format17(pulse.t[i]) << " " << format17(pulse.A1[i]) << " "
        << format17(pulse.phi[i]) << "\n";
  write_text(path, out.str());
}

PulseFile read_pulse(const std::string& path) {
  std::istringstream in(read_text(path));
  PulseFile pf;
  std::string line;
  bool first = true, have_tau = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      if (line != "# slgate pulse v1")
        throw IoError(path + ": not a slgate pulse file (bad magic line)");
      first = false;
      continue;
    }
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      hs >> key;
      if (key == "config_hash") {
        hs >> pf.config_hash;
      } else if (key == "interpolation") {
        hs >> pf.interpolation;
      } else if (key == "tau") {
        std::string v;
        hs >> v;
        pf.tau = parse17(v);
        have_tau = true;
      }
      continue;
    }
    std::istringstream rs(line);
    std::string a, b, c;
    if (!(rs >> a >> b >> c))
      throw IoError(path + ": malformed knot row '" + line + "'");
    pf.pulse.t.push_back(parse17(a));
    pf.pulse.A1.push_back(parse17(b));
    pf.pulse.phi.push_back(parse17(c));
  }
  if (first) throw IoError(path + ": empty pulse file");
  if (pf.interpolation != "pchip")
    throw IoError(path + ": unsupported interpolation '" + pf.interpolation +
                  "'");
  try {
    pf.pulse.validate();
  } catch (const std::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  if (!have_tau || std::abs(pf.tau - pf.pulse.tau()) >
                       1e-12 * std::max(1.0, std::abs(pf.tau)))
    throw IoError(path + ": header tau does not match the last knot time");
  return pf;
}

std::string gate_report_json(const GateReport& r,
                             const std::string& config_hash) {
  // pulse knot times are stored in optimizer (natural) units on the report;
  // artifacts carry microseconds
  std::vector<double> t_us(r.pulse.t.size());
  const double to_us = r.tau_nat > 0.0 ? r.tau_s / r.tau_nat * 1e6 : 0.0;
  for (size_t i = 0; i < t_us.size(); ++i) t_us[i] = r.pulse.t[i] * to_us;
  json g = {
      {"schema_version", 1},
      {"config_hash", config_hash},
      {"tau_us", r.tau_s * 1e6},
      {"tau_natural", r.tau_nat},
      {"F_target", r.f_target},
      {"F_all", r.f_all},
      {"F_error", r.f_error},
      {"merge_phase_rad", r.merge_phase},
      {"U_int_over_h_hz", r.u_int_hold / constants::h_planck},
      {"swap",
       {{"multiples", r.swap.multiples},
        {"hold_us", r.swap.hold * 1e6},
        {"total_us", r.swap.total * 1e6}}},
      {"sqrt_swap",
       {{"multiples", r.sqrt_swap.multiples},
        {"hold_us", r.sqrt_swap.hold * 1e6},
        {"total_us", r.sqrt_swap.total * 1e6}}},
      {"P_sc_swap", r.p_sc_swap},
      {"P_sc_sqrtswap", r.p_sc_sqrt_swap},
      {"pulse",
       {{"t_us", t_us}, {"A1", r.pulse.A1}, {"phi_rad", r.pulse.phi}}},
  };
  return g.dump(2) + "\n";
}

void write_gate_report(const std::string& path, const GateReport& r,
                       const std::string& config_hash) {
  write_text(path, gate_report_json(r, config_hash));
}

std::string error_json(const std::string& kind, const std::string& message) {
  json e = {{"schema_version", 1},
            {"error", {{"kind", kind}, {"message", message}}}};
  return e.dump(2) + "\n";
}

}  // namespace slgate::io
