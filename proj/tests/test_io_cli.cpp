#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "slgate/artifacts.hpp"
#include "slgate/cli.hpp"
#include "slgate/constants.hpp"
#include "slgate/runconfig.hpp"
#include "slgate/species.hpp"

using namespace slgate;
using namespace slgate::constants;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "slgate_io_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string scratch_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  io::write_text(p.string(), text);
  return p.string();
}

// minimal valid config with a merge section (fast solver settings)
std::string merge_config_text() {
  json j = {
      {"species", default_species_path()},
      {"output_dir", (scratch_dir() / "out").string()},
      {"superlattice", {{"lambda1_nm", 1064.0}, {"n", 5}}},
      {"merge",
       {{"n", 5},
        {"grid_points", 512},
        {"dt", 2e-3},
        {"tau_us", json::array({120.0})},
        {"knots", 3},
        {"budgets",
         {{"cold", 18}, {"warm", 10}, {"polish", 0}, {"polish_count", 0}}}}},
  };
  return j.dump(2);
}

std::string scan_config_text(int nl = 6, int na = 5) {
  json j = {
      {"species", default_species_path()},
      {"output_dir", (scratch_dir() / "scan_out").string()},
      {"superlattice", {{"lambda1_nm", 1064.0}, {"n", 5}}},
      {"addressing",
       {{"P_t", 0.01},
        {"lambda2_nm", {{"lo", 840.0}, {"hi", 860.0}, {"count", nl}}},
        {"A", {{"lo", 0.2}, {"hi", 0.4}, {"count", na}}}}},
  };
  return j.dump(2);
}

}  // namespace

TEST_CASE("format17/parse17 round-trips doubles exactly") {
  const double values[] = {0.0,    1.0 / 3.0,      1e-300, 6.02214076e23,
                           pi,     0.1,            -2.5,   5e-324,
                           1.0 + 2.220446049250313e-16};
  for (double v : values) {
    const double back = io::parse17(io::format17(v));
    CHECK(back == v);
  }
  CHECK_THROWS_AS(io::parse17("not-a-number"), io::IoError);
}

TEST_CASE("fnv1a64 matches the reference vectors") {
  CHECK(io::fnv1a64("") == 14695981039346656037ULL);
  CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(io::hash_hex(io::fnv1a64("foobar")) == "fnv64:85944171f73967e8");
}

TEST_CASE("config hash ignores formatting and key order") {
  const std::string a = merge_config_text();
  const RunConfig rca = parse_run_config(a);

  // same content, different whitespace and key order
  json j = json::parse(a);
  std::string scrambled = "{";
  bool first = true;
  for (auto it = j.rbegin(); it != j.rend(); ++it) {
    scrambled += (first ? "" : ",");
    scrambled += "\n\t\"" + it.key() + "\" :" + it.value().dump();
    first = false;
  }
  scrambled += "}";
  const RunConfig rcb = parse_run_config(scrambled);
  CHECK(rca.config_hash == rcb.config_hash);
  CHECK(rca.canonical == rcb.canonical);

  // any value change moves the hash
  json j2 = json::parse(a);
  j2["merge"]["dt"] = 1e-3;
  CHECK(parse_run_config(j2.dump()).config_hash != rca.config_hash);
}

TEST_CASE("config parser reports every violation at once") {
  json j = {
      {"schema_version", 2},
      {"superlattice", {{"lambda1_nm", 1064.0}}},
      {"addressing",
       {{"P_t", -0.5},
        {"lambda2_nm", {{"lo", 860.0}, {"hi", 840.0}, {"count", 4}}}}},
  };
  try {
    parse_run_config(j.dump());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("schema_version") != std::string::npos);
    CHECK(msg.find("species") != std::string::npos);
    CHECK(msg.find("exactly one of n or lambda2_nm") != std::string::npos);
    CHECK(msg.find("addressing.P_t") != std::string::npos);
    CHECK(msg.find("addressing.lambda2_nm") != std::string::npos);
    CHECK(msg.find("addressing.A") != std::string::npos);
    // one bullet per violation
    CHECK(std::count(msg.begin(), msg.end(), '\n') >= 6);
  }
}

TEST_CASE("superlattice section resolves n to the commensurate wavelength") {
  const RunConfig rc = parse_run_config(merge_config_text());
  REQUIRE(rc.lattice_n.has_value());
  CHECK(*rc.lattice_n == 5);
  CHECK(rc.lattice.lambda2 == doctest::Approx(851.2e-9).epsilon(1e-12));

  json j = json::parse(merge_config_text());
  j["superlattice"]["lambda2_nm"] = 851.2;  // now both n and lambda2_nm
  CHECK_THROWS_AS(parse_run_config(j.dump()), ConfigError);
}

TEST_CASE("merge section converts units and folds trap frequencies") {
  json j = json::parse(merge_config_text());
  j["merge"]["error_box"] = {{"amp_percent", 0.1}, {"phase_percent_pi", 0.2}};
  RunConfig rc = parse_run_config(j.dump());
  CHECK(rc.merge.cfg.box.amp_frac == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(rc.merge.cfg.box.phase_offset ==
        doctest::Approx(0.002 * pi).epsilon(1e-12));

  // trap frequencies replace the transverse depth; the geometric mean of
  // nu_y, nu_z at depth 32 Er reproduces 32
  const Species sp = load_species(default_species_path());
  const double er1_hz = recoil_energy(sp, 1064e-9) / h_planck;
  const double nu32 = 2.0 * er1_hz * std::sqrt(32.0);
  j["merge"]["nu_y_hz"] = 2.0 * nu32;
  j["merge"]["nu_z_hz"] = 0.5 * nu32;
  rc = parse_run_config(j.dump());
  rc.merge.resolve_transverse(sp);
  CHECK(rc.merge.cfg.transverse_depth == doctest::Approx(32.0).epsilon(1e-10));

  j["merge"]["transverse_depth"] = 32.0;  // both forms: rejected
  CHECK_THROWS_AS(parse_run_config(j.dump()), ConfigError);
}

TEST_CASE("flag overrides beat file values") {
  const std::string base = merge_config_text();
  const std::string text = cli::apply_overrides(
      base, {"merge.dt=0.004", "merge.tau_us=[250,289]",
             "superlattice.A=0.3", "output_dir=elsewhere"});
  const RunConfig rc = parse_run_config(text);
  CHECK(rc.merge.cfg.dt == doctest::Approx(4e-3).epsilon(1e-14));
  REQUIRE(rc.merge.sweep.taus_us.size() == 2);
  CHECK(rc.merge.sweep.taus_us[0] == doctest::Approx(250.0));
  CHECK(rc.merge.sweep.taus_us[1] == doctest::Approx(289.0));
  CHECK(rc.lattice.A == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(rc.output_dir == "elsewhere");

  // later flags beat earlier ones
  const RunConfig rc2 = parse_run_config(
      cli::apply_overrides(base, {"merge.dt=0.004", "merge.dt=0.005"}));
  CHECK(rc2.merge.cfg.dt == doctest::Approx(5e-3).epsilon(1e-14));

  CHECK_THROWS_AS(cli::apply_overrides(base, {"no-equals-sign"}), ConfigError);
  CHECK_THROWS_AS(cli::apply_overrides(base, {"species.x.y=1"}), ConfigError);
  CHECK_THROWS_AS(cli::apply_overrides("{broken", {"a=1"}), ConfigError);
}

TEST_CASE("pulse files round-trip exactly") {
  ControlPulse p;
  p.t = {0.0, 97.3e0 / 3.0, 289.0};  // microseconds in stored form
  p.A1 = {0.0, 23.456789012345678, 45.0};
  p.phi = {0.25544393683694816, 0.1, -0.05};
  const std::string path = (scratch_dir() / "pulse.txt").string();
  io::write_pulse(path, p, "fnv64:0123456789abcdef");

  const io::PulseFile pf = io::read_pulse(path);
  CHECK(pf.version == 1);
  CHECK(pf.config_hash == "fnv64:0123456789abcdef");
  CHECK(pf.interpolation == "pchip");
  CHECK(pf.tau == p.tau());
  REQUIRE(pf.pulse.t.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(pf.pulse.t[i] == p.t[i]);
    CHECK(pf.pulse.A1[i] == p.A1[i]);
    CHECK(pf.pulse.phi[i] == p.phi[i]);
  }

  // tampered copies are rejected with the offending path in the message
  const std::string text = io::read_text(path);
  const std::string bad_magic =
      scratch_file("bad_magic.txt", "# not a pulse\n" + text);
  CHECK_THROWS_AS(io::read_pulse(bad_magic), io::IoError);

  std::string wrong_tau = text;
  wrong_tau.replace(wrong_tau.find("# tau "), 7, "# tau 9");
  CHECK_THROWS_AS(io::read_pulse(scratch_file("bad_tau.txt", wrong_tau)),
                  io::IoError);

  const std::string short_row = text + "1 2\n";
  CHECK_THROWS_AS(io::read_pulse(scratch_file("bad_row.txt", short_row)),
                  io::IoError);
}

TEST_CASE("scan CSV round-trips bitwise with its header and hash") {
  std::vector<io::ScanRow> rows;
  for (int i = 0; i < 7; ++i)
    rows.push_back({840.0 + i / 3.0, 0.2 + 0.01 * i, 0.016 * (1 + i),
                    1e-4 * std::sqrt(2.0 + i), 1.0 - 1e-4 * i});
  const std::string path = (scratch_dir() / "scan.csv").string();
  io::write_scan_csv(path, rows, "fnv64:feedfacefeedface");

  std::string hash;
  const auto back = io::read_scan_csv(path, &hash);
  CHECK(hash == "fnv64:feedfacefeedface");
  REQUIRE(back.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].lambda2_nm == rows[i].lambda2_nm);
    CHECK(back[i].A == rows[i].A);
    CHECK(back[i].detuning_over_etaEr == rows[i].detuning_over_etaEr);
    CHECK(back[i].gate_time_s_at_eta == rows[i].gate_time_s_at_eta);
    CHECK(back[i].success_probability == rows[i].success_probability);
  }

  // summary carries the argmax cell
  const std::string spath = (scratch_dir() / "scan_summary.json").string();
  io::write_scan_summary(spath, rows, "fnv64:feedfacefeedface");
  const json s = json::parse(io::read_text(spath));
  CHECK(s.at("cells").get<size_t>() == rows.size());
  CHECK(s.at("max_success_probability").get<double>() == 1.0);
  CHECK(s.at("argmax").at("lambda2_nm").get<double>() == 840.0);

  CHECK_THROWS_AS(
      io::read_scan_csv(scratch_file("hdr.csv", "lambda2_nm,A\n1,2\n")),
      io::IoError);
  CHECK_THROWS_AS(
      io::read_scan_csv(scratch_file(
          "cols.csv", std::string(io::kScanCsvHeader) + "\n1,2,3\n")),
      io::IoError);
}

TEST_CASE("sweep CSV round-trips bitwise") {
  std::vector<io::SweepRow> rows;
  for (int i = 0; i < 3; ++i)
    rows.push_back({250.0 + 39.0 * i, 0.9987 + 1e-6 * i, 0.994, 0.9832,
                    717.0 + i / 7.0, 905.0, 6.486e-4, 8.186e-4});
  const std::string path = (scratch_dir() / "sweep.csv").string();
  io::write_sweep_csv(path, rows, "fnv64:aaaaaaaaaaaaaaaa");

  std::string hash;
  const auto back = io::read_sweep_csv(path, &hash);
  CHECK(hash == "fnv64:aaaaaaaaaaaaaaaa");
  REQUIRE(back.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].tau_us == rows[i].tau_us);
    CHECK(back[i].f_target == rows[i].f_target);
    CHECK(back[i].f_all == rows[i].f_all);
    CHECK(back[i].f_error == rows[i].f_error);
    CHECK(back[i].t_swap_us == rows[i].t_swap_us);
    CHECK(back[i].t_sqrtswap_us == rows[i].t_sqrtswap_us);
    CHECK(back[i].p_sc_swap == rows[i].p_sc_swap);
    CHECK(back[i].p_sc_sqrtswap == rows[i].p_sc_sqrtswap);
  }

  const std::string spath = (scratch_dir() / "sweep_summary.json").string();
  io::write_sweep_summary(spath, rows, "fnv64:aaaaaaaaaaaaaaaa");
  const json s = json::parse(io::read_text(spath));
  CHECK(s.at("points").get<size_t>() == 3);
  CHECK(s.at("best_f_error").at("tau_us").get<double>() == 250.0);
}

TEST_CASE("gate report JSON carries microsecond knots and both gates") {
  GateReport r;
  r.tau_nat = 4.0;
  r.tau_s = 200e-6;
  r.f_target = 0.9988;
  r.f_all = 0.9941;
  r.f_error = 0.9832;
  r.merge_phase = 0.9890;
  r.u_int_hold = 8.8069e-31;
  r.swap = {1, 139.3e-6, 539.3e-6};
  r.sqrt_swap = {3, 327.4e-6, 727.4e-6};
  r.p_sc_swap = 6.486e-4;
  r.p_sc_sqrt_swap = 8.186e-4;
  r.pulse.t = {0.0, 2.0, 4.0};
  r.pulse.A1 = {0.0, 20.0, 45.0};
  r.pulse.phi = {0.2, 0.3, 0.1};

  const json g = json::parse(io::gate_report_json(r, "fnv64:12"));
  CHECK(g.at("config_hash") == "fnv64:12");
  CHECK(g.at("tau_us").get<double>() == doctest::Approx(200.0));
  CHECK(g.at("swap").at("multiples").get<int>() == 1);
  CHECK(g.at("sqrt_swap").at("multiples").get<int>() == 3);
  CHECK(g.at("swap").at("total_us").get<double>() ==
        doctest::Approx(539.3));
  CHECK(g.at("P_sc_sqrtswap").get<double>() == doctest::Approx(8.186e-4));
  const auto t_us = g.at("pulse").at("t_us").get<std::vector<double>>();
  REQUIRE(t_us.size() == 3);
  CHECK(t_us[1] == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(t_us[2] == doctest::Approx(200.0).epsilon(1e-12));

  const json e = json::parse(io::error_json("config", "boom"));
  CHECK(e.at("error").at("kind") == "config");
  CHECK(e.at("error").at("message") == "boom");
}

TEST_CASE("validate command echoes derived quantities") {
  const std::string cfg = scratch_file("ok.json", merge_config_text());
  std::ostringstream out, err;
  const int code = cli::dispatch("validate", cfg, {}, "", out, err);
  CHECK(code == cli::kExitOk);
  const std::string text = out.str();
  CHECK(text.find("config_hash fnv64:") != std::string::npos);
  CHECK(text.find("lambda2_nm 851.2") != std::string::npos);
  CHECK(text.find("a_SLP_nm 2128") != std::string::npos);
  CHECK(text.find("n 5") != std::string::npos);
  CHECK(text.find("Er_lambda2_over_h_Hz 3168.4587") != std::string::npos);
  CHECK(text.find("g_natural 0.19806473321228") != std::string::npos);
  CHECK(text.rfind("ok\n") == text.size() - 3);
}

TEST_CASE("dispatch maps failure kinds to exit codes") {
  std::ostringstream out, err;

  // unreadable config file
  CHECK(cli::dispatch("validate", "/nonexistent/really.json", {}, "", out,
                      err) == cli::kExitConfig);
  json e = json::parse(err.str());
  CHECK(e.at("error").at("kind") == "io");

  // config violations
  err.str("");
  const std::string bad =
      scratch_file("bad.json", R"({"superlattice": {"lambda1_nm": 1064}})");
  CHECK(cli::dispatch("validate", bad, {}, "", out, err) == cli::kExitConfig);
  e = json::parse(err.str());
  CHECK(e.at("error").at("kind") == "config");

  // missing species file: named in the message
  err.str("");
  json j = json::parse(merge_config_text());
  j["species"] = "/nonexistent/species.json";
  const std::string nosp = scratch_file("nosp.json", j.dump());
  CHECK(cli::dispatch("validate", nosp, {}, "", out, err) ==
        cli::kExitConfig);
  e = json::parse(err.str());
  CHECK(e.at("error").at("kind") == "species");
  CHECK(e.at("error").at("message").get<std::string>().find(
            "/nonexistent/species.json") != std::string::npos);

  // unknown command
  err.str("");
  const std::string okc = scratch_file("ok2.json", merge_config_text());
  CHECK(cli::dispatch("frobnicate", okc, {}, "", out, err) ==
        cli::kExitConfig);

  // numerical failure: replaying a pulse that cannot merge anything
  err.str("");
  ControlPulse junk;
  junk.t = {0.0, 1e12};  // microseconds: absurd duration
  junk.A1 = {0.0, 45.0};
  junk.phi = {0.0, 0.0};
  const std::string junk_path = (scratch_dir() / "junk_pulse.txt").string();
  io::write_pulse(junk_path, junk, "");
  CHECK(cli::dispatch("replay", okc, {}, junk_path, out, err) ==
        cli::kExitNumeric);
  e = json::parse(err.str());
  CHECK(e.at("error").at("kind") == "numerical");

  // error.json lands in the output dir once the config is known
  err.str("");
  const fs::path edir = scratch_dir() / "err_out";
  json jm = json::parse(merge_config_text());
  jm["output_dir"] = edir.string();
  const std::string emerge = scratch_file("err_merge.json", jm.dump());
  CHECK(cli::dispatch("scan", emerge, {}, "", out, err) == cli::kExitConfig);
  const json efile = json::parse(io::read_text((edir / "error.json").string()));
  CHECK(efile.at("error").at("kind") == "config");  // scan without addressing
}

TEST_CASE("scan command writes deterministic artifacts") {
  const std::string cfg = scratch_file("scan.json", scan_config_text());
  std::ostringstream out, err;
  REQUIRE(cli::dispatch("scan", cfg, {}, "", out, err) == cli::kExitOk);

  const fs::path dir = scratch_dir() / "scan_out";
  std::string hash;
  const auto rows = io::read_scan_csv((dir / "scan.csv").string(), &hash);
  REQUIRE(rows.size() == 30);  // 6 lambda2 x 5 A, row-major
  CHECK(rows[0].lambda2_nm == doctest::Approx(840.0).epsilon(1e-12));
  CHECK(rows[0].A == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(rows[1].A == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rows[5].lambda2_nm == doctest::Approx(844.0).epsilon(1e-12));
  CHECK(hash == parse_run_config(scan_config_text()).config_hash);
  // incommensurate wavelengths can fail to address (success 0); the rest of
  // the window around 851.2 nm addresses well
  int good = 0;
  double best = 0.0;
  for (const auto& r : rows) {
    CHECK(r.success_probability >= 0.0);
    CHECK(r.success_probability <= 1.0);
    CHECK(r.detuning_over_etaEr >= 0.0);
    if (r.success_probability > 0.9) ++good;
    best = std::max(best, r.success_probability);
  }
  CHECK(good >= 15);
  CHECK(best > 0.99);

  // reruns and single-worker runs reproduce the bytes exactly
  const std::string first = io::read_text((dir / "scan.csv").string());
  setenv("SLGATE_WORKERS", "1", 1);
  std::ostringstream out2;
  REQUIRE(cli::dispatch("scan", cfg, {}, "", out2, err) == cli::kExitOk);
  setenv("SLGATE_WORKERS", "3", 1);
  CHECK(io::read_text((dir / "scan.csv").string()) == first);
  std::ostringstream out3;
  REQUIRE(cli::dispatch("scan", cfg, {}, "", out3, err) == cli::kExitOk);
  CHECK(io::read_text((dir / "scan.csv").string()) == first);
  CHECK(out2.str() == out3.str());
  unsetenv("SLGATE_WORKERS");
}

TEST_CASE("merge and replay commands round-trip a pulse") {
  const std::string cfg = scratch_file("merge.json", merge_config_text());
  std::ostringstream out, err;
  REQUIRE(cli::dispatch("merge", cfg, {}, "", out, err) == cli::kExitOk);

  const fs::path dir = scratch_dir() / "out";
  CHECK(fs::exists(dir / "sweep.csv"));
  CHECK(fs::exists(dir / "sweep_summary.json"));
  const fs::path pulse_path = dir / "pulse_tau120us.txt";
  const fs::path report_path = dir / "gate_tau120us.json";
  REQUIRE(fs::exists(pulse_path));
  REQUIRE(fs::exists(report_path));

  std::string hash;
  const auto rows = io::read_sweep_csv((dir / "sweep.csv").string(), &hash);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].tau_us == doctest::Approx(120.0));
  const RunConfig rc = parse_run_config(merge_config_text());
  CHECK(hash == rc.config_hash);

  // stored knots are microseconds spanning [0, tau]
  const io::PulseFile pf = io::read_pulse(pulse_path.string());
  CHECK(pf.config_hash == rc.config_hash);
  CHECK(pf.tau == doctest::Approx(120.0).epsilon(1e-9));

  // the gate report and the sweep row agree
  const json g = json::parse(io::read_text(report_path.string()));
  CHECK(g.at("F_target").get<double>() ==
        doctest::Approx(rows[0].f_target).epsilon(1e-15));
  CHECK(g.at("tau_us").get<double>() == doctest::Approx(120.0).epsilon(1e-9));

  // replaying the stored pulse reproduces the artifact fidelities exactly
  std::ostringstream rep1, rep2;
  REQUIRE(cli::dispatch("replay", cfg, {}, pulse_path.string(), rep1, err) ==
          cli::kExitOk);
  REQUIRE(cli::dispatch("replay", cfg, {}, pulse_path.string(), rep2, err) ==
          cli::kExitOk);
  CHECK(rep1.str() == rep2.str());
  const json rj =
      json::parse(io::read_text((dir / "replay_report.json").string()));
  CHECK(rj.at("F_target").get<double>() ==
        doctest::Approx(rows[0].f_target).epsilon(1e-12));
  CHECK(rj.at("F_all").get<double>() ==
        doctest::Approx(rows[0].f_all).epsilon(1e-12));

  // replay under a touched config warns about the hash mismatch
  std::ostringstream rep3;
  REQUIRE(cli::dispatch("replay", cfg, {"merge.record_stride=26"},
                        pulse_path.string(), rep3, err) == cli::kExitOk);
  CHECK(rep3.str().find("warning: pulse was produced under config") !=
        std::string::npos);
}
