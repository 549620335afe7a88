#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Maximally entangled spin states expressed as weighted sign-pattern
// branches in the measurement bases. Relative branch phases never enter the
// density or the velocity fields (the spin basis states are orthogonal, so
// there are no cross terms), hence only probabilities are stored.

namespace pilotwave {

// Orientation of a magnet axis within the particle's local transverse (Y,Z)
// plane, measured from the local Z reference. Normalized to [0, 2pi).
struct MagnetAxis {
  double angle = 0.0;  // radians
};

MagnetAxis make_axis(double angle);

struct MeasurementConfig {
  std::vector<MagnetAxis> axes;  // one per particle
  int n_particles = 0;

  void validate() const;  // axes length must equal n_particles (2, 3 or 4)
};

using SignPattern = std::vector<int>;  // one +1/-1 entry per particle

struct Branch {
  double weight = 0.0;  // probability of the sign pattern
  SignPattern pattern;
};

struct BranchState {
  std::vector<Branch> branches;
  int n_particles = 0;

  // Weights non-negative and summing to 1 within 1e-12; patterns pairwise
  // distinct and of length n_particles. Throws std::invalid_argument.
  void validate() const;
};

// Singlet state measured along axes separated by theta:
// weights {(+,+): s^2/2, (+,-): c^2/2, (-,+): c^2/2, (-,-): s^2/2} with
// s = sin(theta/2), c = cos(theta/2). Exact-zero branches are dropped.
BranchState singlet_branches(double theta);

// Measurement settings for the three-particle state (1/sqrt2)(|+++> - |--->):
// one letter per particle, 'x' out of the propagation plane, 'y' in-plane
// transverse.
enum class MerminSetting { xyy, yxy, yyx, xxx };

// Settings for the four-particle state (1/sqrt2)(|++--> - |--++>).
enum class Ghz4Setting { xxxx, yxyx, yxxy, xxyy };

MerminSetting mermin_setting_from_string(std::string_view s);  // throws on unknown
Ghz4Setting ghz4_setting_from_string(std::string_view s);
std::string to_string(MerminSetting s);
std::string to_string(Ghz4Setting s);

// Four equal 1/4 branches on the sign patterns with product +1 for the xyy,
// yxy, yyx settings and product -1 for xxx.
BranchState mermin_branches(MerminSetting s);

// Eight equal 1/8 branches on the sign patterns whose product equals the
// observable's eigenvalue: -1 for xxxx, yxyx, yxxy and +1 for xxyy.
BranchState ghz4_branches(Ghz4Setting s);

// Magnet axes of a Mermin/GHZ setting: 'x' -> local angle 0, 'y' -> pi/2.
MeasurementConfig mermin_axes(MerminSetting s);
MeasurementConfig ghz4_axes(Ghz4Setting s);

struct OutcomeDistribution {
  std::vector<std::pair<SignPattern, double>> probabilities;

  double probability_of(const SignPattern& pattern) const;  // 0 if absent
};

// Probability of each sign pattern, read directly off the branch weights.
OutcomeDistribution born_distribution(const BranchState& state);

// Initial coordinate along the rotated magnet axis: z cos(angle) + y sin(angle).
double axis_coordinate(double y, double z, MagnetAxis axis);

}  // namespace pilotwave
