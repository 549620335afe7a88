#include "pilotwave/states.hpp"

#include <cmath>
#include <stdexcept>

namespace pilotwave {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

int pattern_product(const SignPattern& p) {
  int prod = 1;
  for (int s : p) prod *= s;
  return prod;
}

// All n-particle sign patterns whose product equals `product`, in
// lexicographic order with +1 before -1.
std::vector<SignPattern> patterns_with_product(int n, int product) {
  std::vector<SignPattern> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    SignPattern p(n);
    for (int i = 0; i < n; ++i) p[i] = (mask >> (n - 1 - i)) & 1 ? -1 : 1;
    if (pattern_product(p) == product) out.push_back(std::move(p));
  }
  return out;
}

BranchState equal_weight_state(int n, int product) {
  BranchState state;
  state.n_particles = n;
  auto patterns = patterns_with_product(n, product);
  const double w = 1.0 / static_cast<double>(patterns.size());
  for (auto& p : patterns) state.branches.push_back(Branch{w, std::move(p)});
  state.validate();
  return state;
}

MeasurementConfig axes_from_letters(std::string_view letters) {
  MeasurementConfig cfg;
  cfg.n_particles = static_cast<int>(letters.size());
  for (char c : letters) {
    cfg.axes.push_back(make_axis(c == 'x' ? 0.0 : kPi / 2.0));
  }
  return cfg;
}

}  // namespace

MagnetAxis make_axis(double angle) {
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return MagnetAxis{a};
}

void MeasurementConfig::validate() const {
  if (n_particles < 1 || static_cast<int>(axes.size()) != n_particles) {
    throw std::invalid_argument("MeasurementConfig: axes length must equal n_particles");
  }
}

void BranchState::validate() const {
  if (branches.empty()) throw std::invalid_argument("BranchState: empty branch list");
  double sum = 0.0;
  for (const auto& b : branches) {
    if (!(b.weight >= 0.0)) throw std::invalid_argument("BranchState: negative weight");
    if (static_cast<int>(b.pattern.size()) != n_particles) {
      throw std::invalid_argument("BranchState: pattern length mismatch");
    }
    for (int s : b.pattern) {
      if (s != 1 && s != -1) throw std::invalid_argument("BranchState: pattern entries must be +1/-1");
    }
    sum += b.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("BranchState: weights must sum to 1 within 1e-12");
  }
  for (std::size_t i = 0; i < branches.size(); ++i) {
    for (std::size_t j = i + 1; j < branches.size(); ++j) {
      if (branches[i].pattern == branches[j].pattern) {
        throw std::invalid_argument("BranchState: duplicate pattern");
      }
    }
  }
}

BranchState singlet_branches(double theta) {
  const double s = std::sin(theta / 2.0);
  const double c = std::cos(theta / 2.0);
  const double ws = s * s / 2.0;
  const double wc = c * c / 2.0;

  BranchState state;
  state.n_particles = 2;
  if (ws != 0.0) state.branches.push_back(Branch{ws, {+1, +1}});
  if (wc != 0.0) state.branches.push_back(Branch{wc, {+1, -1}});
  if (wc != 0.0) state.branches.push_back(Branch{wc, {-1, +1}});
  if (ws != 0.0) state.branches.push_back(Branch{ws, {-1, -1}});
  state.validate();
  return state;
}

MerminSetting mermin_setting_from_string(std::string_view s) {
  if (s == "xyy") return MerminSetting::xyy;
  if (s == "yxy") return MerminSetting::yxy;
  if (s == "yyx") return MerminSetting::yyx;
  if (s == "xxx") return MerminSetting::xxx;
  throw std::invalid_argument("unknown Mermin setting: " + std::string(s));
}

Ghz4Setting ghz4_setting_from_string(std::string_view s) {
  if (s == "xxxx") return Ghz4Setting::xxxx;
  if (s == "yxyx") return Ghz4Setting::yxyx;
  if (s == "yxxy") return Ghz4Setting::yxxy;
  if (s == "xxyy") return Ghz4Setting::xxyy;
  throw std::invalid_argument("unknown GHZ-4 setting: " + std::string(s));
}

std::string to_string(MerminSetting s) {
  switch (s) {
    case MerminSetting::xyy: return "xyy";
    case MerminSetting::yxy: return "yxy";
    case MerminSetting::yyx: return "yyx";
    case MerminSetting::xxx: return "xxx";
  }
  throw std::invalid_argument("unknown Mermin setting");
}

std::string to_string(Ghz4Setting s) {
  switch (s) {
    case Ghz4Setting::xxxx: return "xxxx";
    case Ghz4Setting::yxyx: return "yxyx";
    case Ghz4Setting::yxxy: return "yxxy";
    case Ghz4Setting::xxyy: return "xxyy";
  }
  throw std::invalid_argument("unknown GHZ-4 setting");
}

BranchState mermin_branches(MerminSetting s) {
  // The state is a simultaneous eigenstate of the product observables with
  // eigenvalue +1 for xyy/yxy/yyx and -1 for xxx; only patterns with the
  // matching sign product carry weight.
  return equal_weight_state(3, s == MerminSetting::xxx ? -1 : +1);
}

BranchState ghz4_branches(Ghz4Setting s) {
  return equal_weight_state(4, s == Ghz4Setting::xxyy ? +1 : -1);
}

MeasurementConfig mermin_axes(MerminSetting s) { return axes_from_letters(to_string(s)); }
MeasurementConfig ghz4_axes(Ghz4Setting s) { return axes_from_letters(to_string(s)); }

double OutcomeDistribution::probability_of(const SignPattern& pattern) const {
  for (const auto& [p, prob] : probabilities) {
    if (p == pattern) return prob;
  }
  return 0.0;
}

OutcomeDistribution born_distribution(const BranchState& state) {
  state.validate();
  OutcomeDistribution dist;
  dist.probabilities.reserve(state.branches.size());
  for (const auto& b : state.branches) dist.probabilities.emplace_back(b.pattern, b.weight);
  return dist;
}

double axis_coordinate(double y, double z, MagnetAxis axis) {
  return z * std::cos(axis.angle) + y * std::sin(axis.angle);
}

}  // namespace pilotwave
