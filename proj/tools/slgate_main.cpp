#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slgate/cli.hpp"

// Front end for the superlattice gate toolkit.
//
// Subcommands: scan | merge | validate | replay. Every subcommand takes a
// JSON run-configuration file; --set overrides individual values (flags beat
// file values, later flags beat earlier ones). Worker threads come from
// --workers or the SLGATE_WORKERS environment variable.
int main(int argc, char** argv) {
  CLI::App app{"site-selective addressing and collisional-gate pulses in a "
               "two-color optical superlattice"};
  app.require_subcommand(1);

  std::string config_path, pulse_path, output_dir;
  std::vector<std::string> sets;
  std::vector<double> tau_us;
  int workers = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON run configuration file")
        ->required();
    sub->add_option("--set", sets,
                    "override a config value as dotted.path=json, e.g. "
                    "--set superlattice.A=0.3 (repeatable)");
    sub->add_option("-o,--output-dir", output_dir,
                    "artifact directory (overrides config output_dir)");
    sub->add_option("--workers", workers,
                    "worker thread count (same as SLGATE_WORKERS)");
  };

  CLI::App* scan = app.add_subcommand(
      "scan", "addressing figure-of-merit map over (lambda2, A)");
  add_common(scan);
  CLI::App* merge = app.add_subcommand(
      "merge", "optimize well-merging pulses over the configured durations");
  add_common(merge);
  merge->add_option("--tau-us", tau_us,
                    "gate durations in microseconds (overrides merge.tau_us)");
  CLI::App* validate = app.add_subcommand(
      "validate", "check the configuration and print derived quantities");
  add_common(validate);
  CLI::App* replay = app.add_subcommand(
      "replay", "re-evaluate a stored pulse file without optimization");
  add_common(replay);
  replay->add_option("pulse", pulse_path, "pulse file to replay")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : slgate::cli::kExitConfig;
  }

  if (!output_dir.empty()) sets.push_back("output_dir=" + output_dir);
  if (!tau_us.empty()) {
    std::string arr = "merge.tau_us=[";
    for (size_t i = 0; i < tau_us.size(); ++i)
      arr += (i ? "," : "") + std::to_string(tau_us[i]);
    sets.push_back(arr + "]");
  }
  if (workers > 0)
    setenv("SLGATE_WORKERS", std::to_string(workers).c_str(), 1);

  const std::string command = app.get_subcommands().front()->get_name();
  return slgate::cli::dispatch(command, config_path, sets, pulse_path,
                               std::cout, std::cerr);
}
