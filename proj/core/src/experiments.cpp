#include "pilotwave/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "pilotwave/parallel.hpp"
#include "pilotwave/rng.hpp"

namespace pilotwave {

namespace {

int outcome_product(const Outcome& o) {
  int prod = 1;
  for (int s : o.signs) prod *= s;
  return prod;
}

// One Bell setting: axes at global angles (gl, gr). The entangled state sees
// only the angle between the fields; the projections use each particle's
// local angle relative to its frame reference.
Outcome run_bell_setting(const InitialSample& sample, double gl, double gr,
                         const BellGeometry& geo, const PhysicalParams& params,
                         const JointOptions& opt, std::string* diagnostic = nullptr) {
  const BranchState state = singlet_branches(gr - gl);
  MeasurementConfig config;
  config.n_particles = 2;
  config.axes = {make_axis(gl - geo.left_reference), make_axis(gr - geo.right_reference)};
  return run_joint(state, sample, config, params, opt, diagnostic);
}

CorrelationEstimate reduce_products(const std::vector<int>& products) {
  CorrelationEstimate est;
  est.n_samples = static_cast<int>(products.size());
  double sum = 0.0;
  int n_eff = 0;
  for (int p : products) {
    if (p == 0) {
      ++est.n_ambiguous;
    } else {
      sum += p;
      ++n_eff;
    }
  }
  if (n_eff > 0) est.value = sum / n_eff;
  if (n_eff > 1) {
    double ss = 0.0;
    for (int p : products) {
      if (p != 0) ss += (p - est.value) * (p - est.value);
    }
    est.stderr_val = std::sqrt(ss / (n_eff - 1)) / std::sqrt(static_cast<double>(n_eff));
  }
  est.ambiguous_warning = est.n_ambiguous > 0.01 * est.n_samples;
  return est;
}

ContradictionReport run_four_settings(
    const InitialSample& sample, const PhysicalParams& params, const JointOptions& opt,
    const std::vector<std::string>& labels,
    const std::vector<std::pair<BranchState, MeasurementConfig>>& settings,
    const std::vector<int>& expected_products,
    // indices whose product forms product_a; the remaining ones product_b
    const std::vector<std::size_t>& a_indices, const std::vector<std::size_t>& b_indices) {
  ContradictionReport report;
  report.expected_products = expected_products;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    std::string diag;
    Outcome o = run_joint(settings[i].first, sample, settings[i].second, params, opt, &diag);
    report.indeterminate = report.indeterminate || o.ambiguous;
    report.setting_products.push_back(o.ambiguous ? 0 : outcome_product(o));
    report.joint_outcomes.emplace_back(labels[i], std::move(o));
  }
  if (!report.indeterminate) {
    report.product_a = 1;
    for (std::size_t i : a_indices) report.product_a *= report.setting_products[i];
    report.product_b = 1;
    for (std::size_t i : b_indices) report.product_b *= report.setting_products[i];
    report.contradiction = report.product_a != report.product_b;
  }
  return report;
}

UniversalityStats universality(int n, std::uint64_t seed, const PhysicalParams& params,
                               const JointOptions& opt, int n_particles,
                               ContradictionReport (*check)(const InitialSample&,
                                                            const PhysicalParams&,
                                                            const JointOptions&)) {
  const auto samples = sample_initials(n, params.delta_r0, n_particles, seed);
  std::vector<ContradictionReport> reports(n);
  JointOptions serial = opt;
  serial.threads = 1;  // parallelize across samples, not within
  parallel_for_index(n, opt.threads,
                     [&](int i) { reports[i] = check(samples[i], params, serial); });

  UniversalityStats stats;
  stats.n = n;
  for (const auto& r : reports) {
    if (r.indeterminate) {
      ++stats.n_indeterminate;
      continue;
    }
    if (r.contradiction) ++stats.n_contradiction;
    if (r.setting_products != r.expected_products) ++stats.n_eigenvalue_violations;
  }
  return stats;
}

}  // namespace

std::vector<InitialSample> sample_initials(int n, double delta_r0, int n_particles,
                                           std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_initials: n must be >= 1");
  if (!(delta_r0 > 0.0)) throw std::invalid_argument("sample_initials: delta_r0 must be positive");
  std::vector<InitialSample> samples(n);
  for (int i = 0; i < n; ++i) {
    InitialSample& s = samples[i];
    s.sub_seed = derive_subseed(seed, static_cast<std::uint64_t>(i));
    Rng rng(s.sub_seed);
    s.yz.resize(n_particles);
    for (int j = 0; j < n_particles; ++j) {
      s.yz[j][0] = delta_r0 * rng.normal();
      s.yz[j][1] = delta_r0 * rng.normal();
    }
  }
  return samples;
}

Outcome run_joint(const BranchState& state, const InitialSample& sample,
                  const MeasurementConfig& config, const PhysicalParams& params,
                  const JointOptions& opt, std::string* diagnostic) {
  config.validate();
  if (config.n_particles != state.n_particles ||
      config.n_particles != static_cast<int>(sample.yz.size())) {
    throw std::invalid_argument("run_joint: particle count mismatch");
  }
  std::vector<double> coords(config.n_particles);
  for (int i = 0; i < config.n_particles; ++i) {
    coords[i] =
        axis_coordinate(opt.rotation_sense * sample.yz[i][0], sample.yz[i][1], config.axes[i]);
  }
  try {
    return classify(integrate(state, coords, params, opt.step));
  } catch (const StiffnessError& e) {
    if (diagnostic) {
      *diagnostic = std::string(e.what()) + " at t = " + std::to_string(e.t_last);
    }
    Outcome o;
    o.signs.assign(config.n_particles, 0);
    o.ambiguous = true;
    return o;
  }
}

CorrelationEstimate estimate_correlation(double theta, int n, std::uint64_t seed,
                                         const PhysicalParams& params, const JointOptions& opt) {
  if (n < 100) throw std::invalid_argument("estimate_correlation: n must be >= 100");
  const auto samples = sample_initials(n, params.delta_r0, 2, seed);
  const BranchState state = singlet_branches(theta);
  MeasurementConfig config;
  config.n_particles = 2;
  config.axes = {make_axis(0.0), make_axis(0.0)};  // each axis is its particle's local Z

  std::vector<int> products(n, 0);
  JointOptions serial = opt;
  serial.threads = 1;
  parallel_for_index(n, opt.threads, [&](int i) {
    const Outcome o = run_joint(state, samples[i], config, params, serial);
    products[i] = o.ambiguous ? 0 : o.signs[0] * o.signs[1];
  });
  return reduce_products(products);
}

std::array<AnglePair, 4> paper_chsh_settings() {
  const BellGeometry geo;
  return {AnglePair{geo.z_left, geo.z_right}, AnglePair{geo.z_left, geo.zp_right},
          AnglePair{geo.zp_left, geo.zp_right}, AnglePair{geo.zp_left, geo.z_right}};
}

ChshEstimate chsh(const std::array<AnglePair, 4>& settings, int n, std::uint64_t seed,
                  const PhysicalParams& params, const JointOptions& opt) {
  ChshEstimate est;
  double var = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double theta = settings[i].right - settings[i].left;
    est.terms[i] =
        estimate_correlation(theta, n, derive_subseed(seed, 1000 + i), params, opt);
    var += est.terms[i].stderr_val * est.terms[i].stderr_val;
  }
  est.s_value = est.terms[0].value + est.terms[1].value + est.terms[2].value -
                est.terms[3].value;
  est.stderr_val = std::sqrt(var);
  return est;
}

ContradictionReport two_particle_contradiction(const InitialSample& sample,
                                               const PhysicalParams& params,
                                               const BellGeometry& geo, const JointOptions& opt) {
  // Same sample across all four settings: the counterfactual probe.
  const std::array<std::pair<double, double>, 4> angles = {
      std::pair{geo.z_left, geo.z_right},     // product_a
      std::pair{geo.zp_left, geo.zp_right},   // product_a
      std::pair{geo.zp_left, geo.z_right},    // product_b
      std::pair{geo.z_left, geo.zp_right}};   // product_b
  const std::vector<std::string> labels = {"Z_L,Z_R", "Z'_L,Z'_R", "Z'_L,Z_R", "Z_L,Z'_R"};

  ContradictionReport report;
  for (std::size_t i = 0; i < 4; ++i) {
    std::string diag;
    Outcome o = run_bell_setting(sample, angles[i].first, angles[i].second, geo, params, opt,
                                 &diag);
    report.indeterminate = report.indeterminate || o.ambiguous;
    report.setting_products.push_back(o.ambiguous ? 0 : outcome_product(o));
    report.joint_outcomes.emplace_back(labels[i], std::move(o));
  }
  if (!report.indeterminate) {
    report.product_a = report.setting_products[0] * report.setting_products[1];
    report.product_b = report.setting_products[2] * report.setting_products[3];
    report.contradiction = report.product_a != report.product_b;
  }
  return report;
}

FractionEstimate contradiction_fraction(int n, std::uint64_t seed, const PhysicalParams& params,
                                        const BellGeometry& geo, const JointOptions& opt) {
  if (n < 1000) throw std::invalid_argument("contradiction_fraction: n must be >= 1000");
  const auto samples = sample_initials(n, params.delta_r0, 2, seed);
  std::vector<int> flags(n, 0);  // 1 contradiction, 0 none, -1 indeterminate
  JointOptions serial = opt;
  serial.threads = 1;
  parallel_for_index(n, opt.threads, [&](int i) {
    const ContradictionReport r = two_particle_contradiction(samples[i], params, geo, serial);
    flags[i] = r.indeterminate ? -1 : (r.contradiction ? 1 : 0);
  });

  FractionEstimate est;
  est.n = n;
  int hits = 0;
  for (int f : flags) {
    if (f == 1) ++hits;
    if (f == -1) ++est.n_indeterminate;
  }
  est.fraction = static_cast<double>(hits) / n;
  est.stderr_val = std::sqrt(est.fraction * (1.0 - est.fraction) / n);
  return est;
}

ContradictionReport mermin_check(const InitialSample& sample, const PhysicalParams& params,
                                 const JointOptions& opt) {
  if (sample.yz.size() != 3) throw std::invalid_argument("mermin_check: need a 3-particle sample");
  const std::array<MerminSetting, 4> settings = {MerminSetting::xyy, MerminSetting::yxy,
                                                 MerminSetting::yyx, MerminSetting::xxx};
  std::vector<std::string> labels;
  std::vector<std::pair<BranchState, MeasurementConfig>> runs;
  for (MerminSetting s : settings) {
    labels.push_back(to_string(s));
    runs.emplace_back(mermin_branches(s), mermin_axes(s));
  }
  // product_a: the x-product implied by the first three settings (the
  // squared y-predictions drop out under the locality assumption).
  return run_four_settings(sample, params, opt, labels, runs, {+1, +1, +1, -1}, {0, 1, 2}, {3});
}

ContradictionReport ghz4_check(const InitialSample& sample, const PhysicalParams& params,
                               const JointOptions& opt) {
  if (sample.yz.size() != 4) throw std::invalid_argument("ghz4_check: need a 4-particle sample");
  const std::array<Ghz4Setting, 4> settings = {Ghz4Setting::xxxx, Ghz4Setting::yxyx,
                                               Ghz4Setting::yxxy, Ghz4Setting::xxyy};
  std::vector<std::string> labels;
  std::vector<std::pair<BranchState, MeasurementConfig>> runs;
  for (Ghz4Setting s : settings) {
    labels.push_back(to_string(s));
    runs.emplace_back(ghz4_branches(s), ghz4_axes(s));
  }
  // product_a: the xxxx product implied by the last three settings.
  return run_four_settings(sample, params, opt, labels, runs, {-1, -1, -1, +1}, {1, 2, 3}, {0});
}

UniversalityStats mermin_universality(int n, std::uint64_t seed, const PhysicalParams& params,
                                      const JointOptions& opt) {
  return universality(n, seed, params, opt, 3,
                      [](const InitialSample& s, const PhysicalParams& p, const JointOptions& o) {
                        return mermin_check(s, p, o);
                      });
}

UniversalityStats ghz4_universality(int n, std::uint64_t seed, const PhysicalParams& params,
                                    const JointOptions& opt) {
  return universality(n, seed, params, opt, 4,
                      [](const InitialSample& s, const PhysicalParams& p, const JointOptions& o) {
                        return ghz4_check(s, p, o);
                      });
}

InitialSample paper_first_positions() {
  InitialSample s;
  const double r3 = std::sqrt(3.0) / 2.0;
  s.yz = {{1e-3 * r3, 1e-3 * 0.5}, {1.1e-3 * r3, 1.1e-3 * 0.5}};
  return s;
}

InitialSample paper_mirrored_positions() {
  InitialSample s;
  const double r3 = std::sqrt(3.0) / 2.0;
  s.yz = {{1e-3 * r3, 1e-3 * 0.5}, {-1e-3 * r3, -1e-3 * 0.5}};
  return s;
}

}  // namespace pilotwave
