#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pilotwave/version.hpp"
#include "pilotwave_cli/config.hpp"

// Subcommands: constants, trajectory, bell, chsh, two-contradiction,
// fraction, mermin, ghz4, oracle-check, screen.
// Exit codes: 0 ok, 2 config error, 3 indeterminate-dominated, 4 I/O.

namespace {

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  int samples = 0;
  double theta = 0.0;
  std::string out_dir;
  int rotation_sense = 0;
  unsigned threads = 0;

  bool seed_set = false, samples_set = false, theta_set = false, sense_set = false,
       threads_set = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON config file");
  cmd->add_option("--seed", f.seed, "RNG seed")->each([&](const std::string&) { f.seed_set = true; });
  cmd->add_option("--samples", f.samples, "Monte Carlo sample count")
      ->each([&](const std::string&) { f.samples_set = true; });
  cmd->add_option("--theta", f.theta, "singlet angle between fields, radians")
      ->each([&](const std::string&) { f.theta_set = true; });
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--rotation-sense", f.rotation_sense, "axis rotation sense, +1 or -1")
      ->each([&](const std::string&) { f.sense_set = true; });
  cmd->add_option("--threads", f.threads, "worker threads (0 = hardware)")
      ->each([&](const std::string&) { f.threads_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bohmian trajectories through Stern-Gerlach magnets for maximally "
               "entangled spin states"};
  app.set_version_flag("--version", pilotwave::kVersion);
  app.require_subcommand(1);

  const std::vector<std::string> scenarios = {"constants", "trajectory",        "bell",
                                              "chsh",      "two-contradiction", "fraction",
                                              "mermin",    "ghz4",              "oracle-check",
                                              "screen"};
  const std::vector<std::string> descriptions = {
      "derived constants k, alpha, beta",
      "integrate one trajectory and write CSV",
      "singlet correlation E(theta) vs the Born value",
      "four-setting CHSH estimate",
      "four-setting contradiction check at fixed initial positions",
      "fraction of Gaussian initial positions giving a contradiction",
      "three-particle equality check over Gaussian samples",
      "four-particle equality check over Gaussian samples",
      "closed-form velocity vs finite-difference oracle on grids",
      "post-magnet spot separation on a distant screen"};

  std::vector<CommonFlags> flags(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    CLI::App* cmd = app.add_subcommand(scenarios[i], descriptions[i]);
    add_common_flags(cmd, flags[i]);
  }

  CLI11_PARSE(app, argc, argv);

  std::size_t chosen = 0;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (app.get_subcommand(scenarios[i])->parsed()) chosen = i;
  }
  const CommonFlags& f = flags[chosen];

  pilotwave::cli::FlagOverrides overrides;
  overrides.scenario = scenarios[chosen];
  if (f.seed_set) overrides.seed = f.seed;
  if (f.samples_set) overrides.samples = f.samples;
  if (f.theta_set) overrides.theta = f.theta;
  if (!f.out_dir.empty()) overrides.out_dir = f.out_dir;
  if (f.sense_set) overrides.rotation_sense = f.rotation_sense;
  if (f.threads_set) overrides.threads = f.threads;

  try {
    const pilotwave::cli::RunConfig cfg = pilotwave::cli::parse_config(
        f.config_path.empty() ? std::nullopt : std::make_optional(f.config_path), overrides);
    return pilotwave::cli::run(cfg);
  } catch (const pilotwave::cli::ConfigError& e) {
    std::cerr << "pilotwave: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "pilotwave: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "pilotwave: " << e.what() << "\n";
    return 4;
  }
}
