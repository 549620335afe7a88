#include "pilotwave_cli/config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"
#include "pilotwave/velocity.hpp"

namespace pilotwave::cli {

using nlohmann::json;

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::constants: return "constants";
    case Scenario::trajectory: return "trajectory";
    case Scenario::bell: return "bell";
    case Scenario::chsh: return "chsh";
    case Scenario::two_contradiction: return "two-contradiction";
    case Scenario::fraction: return "fraction";
    case Scenario::mermin: return "mermin";
    case Scenario::ghz4: return "ghz4";
    case Scenario::oracle_check: return "oracle-check";
    case Scenario::screen: return "screen";
  }
  throw ConfigError("unknown scenario enum value");
}

Scenario scenario_from_string(const std::string& s) {
  for (Scenario sc : {Scenario::constants, Scenario::trajectory, Scenario::bell, Scenario::chsh,
                      Scenario::two_contradiction, Scenario::fraction, Scenario::mermin,
                      Scenario::ghz4, Scenario::oracle_check, Scenario::screen}) {
    if (to_string(sc) == s) return sc;
  }
  throw ConfigError("unknown scenario: " + s);
}

namespace {

int default_samples(Scenario s) {
  switch (s) {
    case Scenario::bell:
    case Scenario::chsh: return 10000;
    case Scenario::fraction:
    case Scenario::mermin:
    case Scenario::ghz4: return 1000;
    default: return 1;
  }
}

void check_keys(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown key in " + where + ": " + key);
    }
  }
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string("field must be a number: ") + key);
  return obj[key].get<double>();
}

void apply_physical(const json& obj, PhysicalParams& p) {
  check_keys(obj, {"mass", "mu", "a0", "a1", "delta_r0", "v0", "tau", "hbar"}, "physical");
  p.mass = get_number(obj, "mass", p.mass);
  p.mu = get_number(obj, "mu", p.mu);
  p.a0 = get_number(obj, "a0", p.a0);
  p.a1 = get_number(obj, "a1", p.a1);
  p.delta_r0 = get_number(obj, "delta_r0", p.delta_r0);
  p.v0 = get_number(obj, "v0", p.v0);
  p.tau = get_number(obj, "tau", p.tau);
  p.hbar = get_number(obj, "hbar", p.hbar);
}

json physical_to_json(const PhysicalParams& p) {
  return json{{"mass", p.mass},         {"mu", p.mu},   {"a0", p.a0}, {"a1", p.a1},
              {"delta_r0", p.delta_r0}, {"v0", p.v0},   {"tau", p.tau}, {"hbar", p.hbar}};
}

RunConfig config_from_json_object(const json& j) {
  check_keys(j, {"scenario", "physical", "seed", "samples", "theta", "rotation_sense", "out",
                 "threads", "trajectory", "chsh_settings", "screen_distance", "positions"},
             "config");
  RunConfig cfg;
  if (j.contains("scenario")) {
    if (!j["scenario"].is_string()) throw ConfigError("field must be a string: scenario");
    cfg.scenario = scenario_from_string(j["scenario"].get<std::string>());
  } else {
    throw ConfigError("missing scenario field");
  }
  if (j.contains("physical")) apply_physical(j["physical"], cfg.physical);
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("samples")) cfg.samples = j["samples"].get<int>();
  cfg.theta = get_number(j, "theta", cfg.theta);
  if (j.contains("rotation_sense")) cfg.rotation_sense = j["rotation_sense"].get<int>();
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<unsigned>();
  if (j.contains("trajectory")) {
    const json& tj = j["trajectory"];
    check_keys(tj, {"state", "setting", "initial"}, "trajectory");
    if (tj.contains("state")) cfg.trajectory.state = tj["state"].get<std::string>();
    if (tj.contains("setting")) cfg.trajectory.setting = tj["setting"].get<std::string>();
    if (tj.contains("initial")) cfg.trajectory.initial = tj["initial"].get<std::vector<double>>();
  }
  if (j.contains("chsh_settings")) {
    const json& cj = j["chsh_settings"];
    if (!cj.is_array() || cj.size() != 4) {
      throw ConfigError("chsh_settings must be an array of four [left,right] angle pairs");
    }
    for (std::size_t i = 0; i < 4; ++i) {
      if (!cj[i].is_array() || cj[i].size() != 2) {
        throw ConfigError("chsh_settings entries must be [left,right] pairs");
      }
      cfg.chsh_settings[i] = AnglePair{cj[i][0].get<double>(), cj[i][1].get<double>()};
    }
  }
  cfg.screen_distance = get_number(j, "screen_distance", cfg.screen_distance);
  if (j.contains("positions")) {
    cfg.positions.clear();
    for (const auto& row : j["positions"]) {
      if (!row.is_array() || row.size() != 2) {
        throw ConfigError("positions entries must be [y,z] pairs");
      }
      cfg.positions.push_back({row[0].get<double>(), row[1].get<double>()});
    }
  }
  return cfg;
}

}  // namespace

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["scenario"] = to_string(cfg.scenario);
  j["physical"] = physical_to_json(cfg.physical);
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["theta"] = cfg.theta;
  j["rotation_sense"] = cfg.rotation_sense;
  j["out"] = cfg.out_dir;
  j["threads"] = cfg.threads;
  j["trajectory"] = json{{"state", cfg.trajectory.state},
                         {"setting", cfg.trajectory.setting},
                         {"initial", cfg.trajectory.initial}};
  json settings = json::array();
  for (const auto& s : cfg.chsh_settings) settings.push_back(json::array({s.left, s.right}));
  j["chsh_settings"] = settings;
  j["screen_distance"] = cfg.screen_distance;
  json pos = json::array();
  for (const auto& p : cfg.positions) pos.push_back(json::array({p[0], p[1]}));
  j["positions"] = pos;
  return j.dump(2);
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json_object(j);
}

RunConfig parse_config(const std::optional<std::string>& config_path,
                       const FlagOverrides& flags) {
  RunConfig cfg;
  bool have_scenario = false;
  bool physical_given = false;

  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) throw ConfigError("cannot open config file: " + *config_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.contains("scenario") && flags.scenario) j["scenario"] = *flags.scenario;
    cfg = config_from_json_object(j);
    have_scenario = true;
    physical_given = j.contains("physical");
  }

  if (flags.scenario) {
    cfg.scenario = scenario_from_string(*flags.scenario);
    have_scenario = true;
  }
  if (!have_scenario) throw ConfigError("missing scenario field");

  // oracle-check defaults to the conditioned parameter set unless the
  // config pins physical parameters explicitly
  if (cfg.scenario == Scenario::oracle_check && !physical_given) {
    cfg.physical = oracle_check_params();
  }

  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.samples) cfg.samples = *flags.samples;
  if (flags.theta) cfg.theta = *flags.theta;
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  if (flags.rotation_sense) cfg.rotation_sense = *flags.rotation_sense;
  if (flags.threads) cfg.threads = *flags.threads;

  if (cfg.samples == 0) cfg.samples = default_samples(cfg.scenario);
  if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
  if (cfg.rotation_sense != 1 && cfg.rotation_sense != -1) {
    throw ConfigError("rotation_sense must be +1 or -1");
  }
  try {
    cfg.physical.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.scenario == Scenario::trajectory) {
    const auto& t = cfg.trajectory;
    if (t.state != "singlet" && t.state != "mermin" && t.state != "ghz4") {
      throw ConfigError("trajectory.state must be singlet, mermin or ghz4");
    }
    const std::size_t want = t.state == "singlet" ? 2 : (t.state == "mermin" ? 3 : 4);
    if (t.initial.size() != want) {
      throw ConfigError("trajectory.initial must have one coordinate per particle");
    }
  }
  if (!cfg.positions.empty() && cfg.positions.size() != 2) {
    throw ConfigError("positions must list exactly two [y,z] pairs");
  }
  if (cfg.screen_distance < 0.0) throw ConfigError("screen_distance must be non-negative");
  return cfg;
}

std::string SummaryRecord::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["inputs"] = json::parse(inputs_json);
  j["results"] = json::parse(results_json);
  j["versions"] = json{{"pilotwave", version}};
  j["wall_time_s"] = wall_time_s;
  return j.dump(2);
}

SummaryRecord SummaryRecord::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("summary is not valid JSON: ") + e.what());
  }
  SummaryRecord rec;
  rec.scenario = j.at("scenario").get<std::string>();
  rec.inputs_json = j.at("inputs").dump(2);
  rec.results_json = j.at("results").dump(2);
  rec.version = j.at("versions").at("pilotwave").get<std::string>();
  rec.wall_time_s = j.at("wall_time_s").get<double>();
  return rec;
}

}  // namespace pilotwave::cli
