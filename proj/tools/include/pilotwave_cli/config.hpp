#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pilotwave/experiments.hpp"
#include "pilotwave/physics.hpp"

// Configuration and scenario dispatch for the command-line runner. Config
// files and summaries are JSON; trajectories are CSV. All numerics are
// serialized at full round-trip precision.

namespace pilotwave::cli {

enum class Scenario {
  constants,
  trajectory,
  bell,
  chsh,
  two_contradiction,
  fraction,
  mermin,
  ghz4,
  oracle_check,
  screen,
};

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);  // throws ConfigError

// Invalid or unknown configuration; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrajectorySpec {
  std::string state = "singlet";          // singlet | mermin | ghz4
  std::string setting = "xyy";            // mermin/ghz4 setting name
  std::vector<double> initial = {1e-3, -1e-3};  // magnet-axis coords, cm
};

struct RunConfig {
  Scenario scenario = Scenario::constants;
  PhysicalParams physical{};  // silver-atom defaults
  std::uint64_t seed = 20060427;
  int samples = 0;  // resolved to the scenario default by parse_config
  double theta = 2.0 * 3.14159265358979323846 / 3.0;  // rad, singlet angle
  int rotation_sense = +1;
  std::string out_dir = ".";
  unsigned threads = 0;  // 0 = hardware concurrency
  TrajectorySpec trajectory{};
  std::array<AnglePair, 4> chsh_settings = paper_chsh_settings();
  double screen_distance = 100.0;  // cm from the magnet exit
  std::vector<std::array<double, 2>> positions;  // two-contradiction (y,z) per particle;
                                                 // empty = paper first positions
};

struct FlagOverrides {
  std::optional<std::string> scenario;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> theta;
  std::optional<std::string> out_dir;
  std::optional<int> rotation_sense;
  std::optional<unsigned> threads;
};

// Loads the optional JSON file, applies flag overrides on top and validates.
// Unknown keys, a missing scenario and non-physical parameters all raise
// ConfigError naming the offender.
RunConfig parse_config(const std::optional<std::string>& config_path, const FlagOverrides& flags);

std::string config_to_json(const RunConfig& config);          // full resolved echo
RunConfig config_from_json(const std::string& text);          // inverse of config_to_json

struct SummaryRecord {
  std::string scenario;
  std::string inputs_json;   // resolved RunConfig (JSON object text)
  std::string results_json;  // scenario results (JSON object text)
  std::string version;
  double wall_time_s = 0.0;

  std::string to_json() const;
  static SummaryRecord from_json(const std::string& text);
};

// Dispatches the scenario, writes <out>/summary.json (and trajectory.csv for
// the trajectory scenario). Returns the process exit code: 0 success,
// 3 indeterminate-dominated (> 5% ambiguous), 4 I/O failure.
int run(const RunConfig& config);

}  // namespace pilotwave::cli
