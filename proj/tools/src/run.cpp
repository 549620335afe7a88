#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "pilotwave/dynamics.hpp"
#include "pilotwave/experiments.hpp"
#include "pilotwave/oracle_check.hpp"
#include "pilotwave/version.hpp"
#include "pilotwave_cli/config.hpp"

namespace pilotwave::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIndeterminate = 3;
constexpr int kExitIo = 4;

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

json outcome_to_json(const Outcome& o) {
  return json{{"signs", o.signs}, {"ambiguous", o.ambiguous}};
}

json report_to_json(const ContradictionReport& r) {
  json outcomes = json::array();
  for (const auto& [label, o] : r.joint_outcomes) {
    json entry = outcome_to_json(o);
    entry["setting"] = label;
    outcomes.push_back(entry);
  }
  return json{{"outcomes", outcomes},
              {"setting_products", r.setting_products},
              {"expected_products", r.expected_products},
              {"product_a", r.product_a},
              {"product_b", r.product_b},
              {"contradiction", r.contradiction},
              {"indeterminate", r.indeterminate}};
}

json correlation_to_json(const CorrelationEstimate& e) {
  return json{{"value", e.value},
              {"stderr", e.stderr_val},
              {"n_samples", e.n_samples},
              {"n_ambiguous", e.n_ambiguous},
              {"ambiguous_warning", e.ambiguous_warning}};
}

BranchState trajectory_state(const RunConfig& cfg) {
  const auto& t = cfg.trajectory;
  if (t.state == "singlet") return singlet_branches(cfg.theta);
  if (t.state == "mermin") return mermin_branches(mermin_setting_from_string(t.setting));
  return ghz4_branches(ghz4_setting_from_string(t.setting));
}

bool write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  const std::size_t n = traj.samples.empty() ? 0 : traj.samples.front().coords.size();
  out << "t";
  for (std::size_t i = 1; i <= n; ++i) out << ",z_" << i;
  out << "\n";
  double t_prev = -1.0;
  for (const auto& pt : traj.samples) {
    if (!(pt.t > t_prev) || !std::isfinite(pt.t)) return false;  // strictly increasing, no NaN
    t_prev = pt.t;
    out << format_full(pt.t);
    for (double z : pt.coords) {
      if (!std::isfinite(z)) return false;
      out << "," << format_full(z);
    }
    out << "\n";
  }
  out.flush();
  return static_cast<bool>(out);
}

struct ScenarioResult {
  json results;
  int exit_code = kExitOk;
  std::string log_line;
};

ScenarioResult run_constants(const RunConfig& cfg) {
  const DerivedConstants dc = derive_constants(cfg.physical);
  ScenarioResult r;
  r.results = json{{"k", dc.k}, {"alpha", dc.alpha}, {"beta", dc.beta}};
  char line[160];
  std::snprintf(line, sizeof(line), "k = %.3g s^-1, alpha = %.3g cm s^-2, beta = %.3g cm^-1 s^-2",
                dc.k, dc.alpha, dc.beta);
  r.log_line = line;
  return r;
}

ScenarioResult run_screen(const RunConfig& cfg) {
  const PhysicalParams& p = cfg.physical;
  if (p.v0 <= 0.0) throw ConfigError("screen scenario requires v0 > 0");
  const DerivedConstants dc = derive_constants(p);
  const double flight = cfg.screen_distance / p.v0;
  const double t_screen = p.tau + flight;
  const double center_up = post_magnet_center(p, +1, t_screen);
  const double separation = 2.0 * center_up;
  const double spot = spread_at(p, t_screen);
  ScenarioResult r;
  r.results = json{{"center_at_tau", dc.alpha * p.tau * p.tau},
                   {"exit_speed", 2.0 * dc.alpha * p.tau},
                   {"screen_distance", cfg.screen_distance},
                   {"time_to_screen", flight},
                   {"spot_separation", separation},
                   {"spot_spread", spot},
                   {"magnet_length_equivalent", p.v0 * p.tau}};
  char line[200];
  std::snprintf(line, sizeof(line),
                "spots %.3g cm apart (spread %.2g cm) on a screen %.3g cm past the magnet",
                separation, spot, cfg.screen_distance);
  r.log_line = line;
  return r;
}

ScenarioResult run_trajectory(const RunConfig& cfg, const fs::path& out_dir) {
  const BranchState state = trajectory_state(cfg);
  const Trajectory traj = integrate(state, cfg.trajectory.initial, cfg.physical);
  const Outcome outcome = classify(traj);
  const fs::path csv = out_dir / "trajectory.csv";
  if (!write_trajectory_csv(csv, traj)) {
    throw std::ios_base::failure("failed writing " + csv.string());
  }
  ScenarioResult r;
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(traj.params_hash));
  r.results = json{{"outcome", outcome_to_json(outcome)},
                   {"eps_class", traj.eps_class},
                   {"n_points", traj.samples.size()},
                   {"final_coords", traj.samples.back().coords},
                   {"params_hash", hash},
                   {"csv", "trajectory.csv"}};
  r.exit_code = outcome.ambiguous ? kExitIndeterminate : kExitOk;
  r.log_line = "trajectory with " + std::to_string(traj.samples.size()) + " points -> " +
               csv.string();
  return r;
}

ScenarioResult run_bell(const RunConfig& cfg, const JointOptions& opt) {
  const CorrelationEstimate est =
      estimate_correlation(cfg.theta, cfg.samples, cfg.seed, cfg.physical, opt);
  ScenarioResult r;
  r.results = correlation_to_json(est);
  r.results["theta"] = cfg.theta;
  r.results["born_value"] = -std::cos(cfg.theta);
  r.exit_code = est.n_ambiguous > 0.05 * est.n_samples ? kExitIndeterminate : kExitOk;
  char line[160];
  std::snprintf(line, sizeof(line), "E(theta=%.4g) = %.4f +- %.4f (Born: %.4f, n=%d)", cfg.theta,
                est.value, est.stderr_val, -std::cos(cfg.theta), est.n_samples);
  r.log_line = line;
  return r;
}

ScenarioResult run_chsh(const RunConfig& cfg, const JointOptions& opt) {
  const ChshEstimate est = chsh(cfg.chsh_settings, cfg.samples, cfg.seed, cfg.physical, opt);
  json terms = json::array();
  int ambiguous = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    json t = correlation_to_json(est.terms[i]);
    t["left"] = cfg.chsh_settings[i].left;
    t["right"] = cfg.chsh_settings[i].right;
    terms.push_back(t);
    ambiguous += est.terms[i].n_ambiguous;
  }
  ScenarioResult r;
  r.results = json{{"s_value", est.s_value}, {"stderr", est.stderr_val}, {"terms", terms}};
  r.exit_code = ambiguous > 0.05 * (4.0 * cfg.samples) ? kExitIndeterminate : kExitOk;
  char line[120];
  std::snprintf(line, sizeof(line), "S = %.4f +- %.4f (n=%d per setting)", est.s_value,
                est.stderr_val, cfg.samples);
  r.log_line = line;
  return r;
}

ScenarioResult run_two_contradiction(const RunConfig& cfg, const JointOptions& opt) {
  InitialSample sample = paper_first_positions();
  if (!cfg.positions.empty()) sample.yz = cfg.positions;
  const ContradictionReport rep = two_particle_contradiction(sample, cfg.physical, {}, opt);
  ScenarioResult r;
  r.results = report_to_json(rep);
  json pos = json::array();
  for (const auto& p : sample.yz) pos.push_back(json::array({p[0], p[1]}));
  r.results["positions"] = pos;
  r.exit_code = rep.indeterminate ? kExitIndeterminate : kExitOk;
  r.log_line = rep.indeterminate
                   ? "indeterminate (ambiguous outcome)"
                   : std::string("products (") + (rep.product_a > 0 ? "+1" : "-1") + ", " +
                         (rep.product_b > 0 ? "+1" : "-1") + "), contradiction = " +
                         (rep.contradiction ? "true" : "false");
  return r;
}

ScenarioResult run_fraction(const RunConfig& cfg, const JointOptions& opt) {
  const FractionEstimate est =
      contradiction_fraction(cfg.samples, cfg.seed, cfg.physical, {}, opt);
  ScenarioResult r;
  r.results = json{{"fraction", est.fraction},
                   {"stderr", est.stderr_val},
                   {"n", est.n},
                   {"n_indeterminate", est.n_indeterminate}};
  r.exit_code = est.n_indeterminate > 0.05 * est.n ? kExitIndeterminate : kExitOk;
  char line[120];
  std::snprintf(line, sizeof(line), "contradiction fraction = %.4f +- %.4f (n=%d)", est.fraction,
                est.stderr_val, est.n);
  r.log_line = line;
  return r;
}

ScenarioResult run_universality(const RunConfig& cfg, const JointOptions& opt, bool mermin) {
  const UniversalityStats stats =
      mermin ? mermin_universality(cfg.samples, cfg.seed, cfg.physical, opt)
             : ghz4_universality(cfg.samples, cfg.seed, cfg.physical, opt);
  const int determinate = stats.n - stats.n_indeterminate;
  const bool universal =
      determinate > 0 && stats.n_contradiction == determinate && stats.n_eigenvalue_violations == 0;
  ScenarioResult r;
  r.results = json{{"n", stats.n},
                   {"n_indeterminate", stats.n_indeterminate},
                   {"n_contradiction", stats.n_contradiction},
                   {"n_eigenvalue_violations", stats.n_eigenvalue_violations},
                   {"expected_products", mermin ? std::vector<int>{+1, +1, +1, -1}
                                               : std::vector<int>{-1, -1, -1, +1}},
                   {"universal", universal}};
  r.exit_code = stats.n_indeterminate > 0.05 * stats.n ? kExitIndeterminate : kExitOk;
  char line[160];
  std::snprintf(line, sizeof(line),
                "%d/%d determinate samples contradictory, %d eigenvalue violations, %d ambiguous",
                stats.n_contradiction, determinate, stats.n_eigenvalue_violations,
                stats.n_indeterminate);
  r.log_line = line;
  return r;
}

ScenarioResult run_oracle_check(const RunConfig& cfg) {
  const auto reports = oracle_equivalence_report(cfg.physical, 10);
  json scenarios = json::array();
  double overall = 0.0;
  for (const auto& rep : reports) {
    scenarios.push_back(json{{"scenario", rep.scenario},
                             {"max_rel_error", rep.max_rel_error},
                             {"points", rep.points}});
    overall = std::max(overall, rep.max_rel_error);
  }
  ScenarioResult r;
  r.results = json{{"scenarios", scenarios},
                   {"overall_max_rel_error", overall},
                   {"tolerance", 1e-6},
                   {"pass", overall < 1e-6}};
  char line[120];
  std::snprintf(line, sizeof(line), "max closed-form vs oracle deviation %.3g (tolerance 1e-6)",
                overall);
  r.log_line = line;
  return r;
}

}  // namespace

int run(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  JointOptions opt;
  opt.rotation_sense = cfg.rotation_sense;
  opt.threads = cfg.threads;

  const fs::path out_dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "pilotwave: cannot create output directory " << out_dir << ": " << ec.message()
              << "\n";
    return kExitIo;
  }

  ScenarioResult result;
  try {
    switch (cfg.scenario) {
      case Scenario::constants: result = run_constants(cfg); break;
      case Scenario::screen: result = run_screen(cfg); break;
      case Scenario::trajectory: result = run_trajectory(cfg, out_dir); break;
      case Scenario::bell: result = run_bell(cfg, opt); break;
      case Scenario::chsh: result = run_chsh(cfg, opt); break;
      case Scenario::two_contradiction: result = run_two_contradiction(cfg, opt); break;
      case Scenario::fraction: result = run_fraction(cfg, opt); break;
      case Scenario::mermin: result = run_universality(cfg, opt, true); break;
      case Scenario::ghz4: result = run_universality(cfg, opt, false); break;
      case Scenario::oracle_check: result = run_oracle_check(cfg); break;
    }
  } catch (const std::ios_base::failure& e) {
    std::cerr << "pilotwave: I/O error: " << e.what() << "\n";
    return kExitIo;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  SummaryRecord rec;
  rec.scenario = to_string(cfg.scenario);
  rec.inputs_json = config_to_json(cfg);
  rec.results_json = result.results.dump(2);
  rec.version = kVersion;
  rec.wall_time_s = wall;

  const fs::path summary = out_dir / "summary.json";
  {
    std::ofstream out(summary, std::ios::binary);
    if (!out) {
      std::cerr << "pilotwave: cannot write " << summary << "\n";
      return kExitIo;
    }
    out << rec.to_json() << "\n";
    out.flush();
    if (!out) {
      std::cerr << "pilotwave: failed writing " << summary << "\n";
      return kExitIo;
    }
  }

  std::cout << "[pilotwave] " << to_string(cfg.scenario) << ": " << result.log_line << " -> "
            << summary.string() << "\n";
  return result.exit_code;
}

}  // namespace pilotwave::cli
