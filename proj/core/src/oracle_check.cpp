#include "pilotwave/oracle_check.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace pilotwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

double field_scale(const DerivedConstants& dc, double t, double zmax) {
  const double den = 1.0 + dc.k * dc.k * t * t;
  const double diffusion = dc.k * dc.k * t / den;
  const double drift = std::abs(2.0 * dc.alpha * t - dc.k * dc.k * dc.alpha * t * t * t / den);
  return diffusion * zmax + drift;
}

}  // namespace

double relative_velocity_error(const VelocityVector& closed, const VelocityVector& oracle,
                               double scale) {
  if (closed.v.size() != oracle.v.size()) {
    throw std::invalid_argument("relative_velocity_error: size mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < closed.v.size(); ++i) {
    const double denom = std::max(std::abs(oracle.v[i]), 1e-5 * scale);
    worst = std::max(worst, std::abs(closed.v[i] - oracle.v[i]) / denom);
  }
  return worst;
}

std::vector<OracleGridReport> oracle_equivalence_report(const PhysicalParams& params,
                                                        int points_per_axis) {
  params.validate();
  const DerivedConstants dc = derive_constants(params);

  std::vector<std::pair<std::string, BranchState>> scenarios;
  scenarios.emplace_back("singlet theta=0", singlet_branches(0.0));
  scenarios.emplace_back("singlet theta=2pi/3", singlet_branches(2.0 * kPi / 3.0));
  for (MerminSetting s : {MerminSetting::xyy, MerminSetting::yxy, MerminSetting::yyx,
                          MerminSetting::xxx}) {
    scenarios.emplace_back("mermin " + to_string(s), mermin_branches(s));
  }
  for (Ghz4Setting s : {Ghz4Setting::xxxx, Ghz4Setting::yxyx, Ghz4Setting::yxxy,
                        Ghz4Setting::xxyy}) {
    scenarios.emplace_back("ghz4 " + to_string(s), ghz4_branches(s));
  }

  const std::array<double, 3> times = {params.tau / 4.0, params.tau / 2.0, params.tau};

  std::vector<OracleGridReport> reports;
  for (const auto& [name, state] : scenarios) {
    const int n = state.n_particles;
    OracleGridReport rep;
    rep.scenario = name;

    for (double t : times) {
      const double drt = spread_at(params, t);
      const double zmax = 3.0 * drt;
      const double scale = field_scale(dc, t, zmax);

      long total = 1;
      for (int i = 0; i < n; ++i) total *= points_per_axis;
      PhaseSpacePoint point;
      point.t = t;
      point.coords.resize(n);
      for (long idx = 0; idx < total; ++idx) {
        long rem = idx;
        for (int i = 0; i < n; ++i) {
          const int j = static_cast<int>(rem % points_per_axis);
          rem /= points_per_axis;
          point.coords[i] = -zmax + 2.0 * zmax * j / (points_per_axis - 1);
        }
        const VelocityVector closed = branch_velocity(state, point, dc);
        const VelocityVector oracle = numeric_velocity_oracle(state, params, point);
        rep.max_rel_error =
            std::max(rep.max_rel_error, relative_velocity_error(closed, oracle, scale));
        ++rep.points;
      }
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace pilotwave
