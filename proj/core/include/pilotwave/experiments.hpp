#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pilotwave/dynamics.hpp"
#include "pilotwave/physics.hpp"
#include "pilotwave/states.hpp"

// Monte Carlo harness for the no-go demonstrations: correlation and CHSH
// estimation for the singlet, the four-setting two-particle contradiction of
// the 120-degree arrangement, and the Mermin / GHZ-4 equality checks.

namespace pilotwave {

struct InitialSample {
  std::vector<std::array<double, 2>> yz;  // per particle (y, z), cm
  std::uint64_t sub_seed = 0;             // seed lineage identifier
};

// n i.i.d. Gaussian samples, mean 0, std delta_r0 per coordinate. Sample i
// depends only on (seed, i), so generation order is irrelevant.
std::vector<InitialSample> sample_initials(int n, double delta_r0, int n_particles,
                                           std::uint64_t seed);

struct JointOptions {
  int rotation_sense = +1;  // sign of the y contribution in axis projections
  StepControl step{};
  unsigned threads = 0;  // 0 = hardware concurrency
};

// Projects each particle's (y, z) onto its magnet axis, integrates the
// coupled dynamics and classifies the outcome. A stiffness failure is
// reported as an ambiguous outcome (diagnostic set if provided).
Outcome run_joint(const BranchState& state, const InitialSample& sample,
                  const MeasurementConfig& config, const PhysicalParams& params,
                  const JointOptions& opt = {}, std::string* diagnostic = nullptr);

struct CorrelationEstimate {
  double value = 0.0;   // mean of sign_L * sign_R over non-ambiguous samples
  double stderr_val = 0.0;
  int n_samples = 0;
  int n_ambiguous = 0;
  bool ambiguous_warning = false;  // more than 1% ambiguous
};

CorrelationEstimate estimate_correlation(double theta, int n, std::uint64_t seed,
                                         const PhysicalParams& params,
                                         const JointOptions& opt = {});

struct AnglePair {
  double left;   // global angle of the left magnet axis, radians
  double right;  // global angle of the right magnet axis
};

// Settings ordered [(Z_L,Z_R), (Z_L,Z'_R), (Z'_L,Z'_R), (Z'_L,Z_R)];
// S = E1 + E2 + E3 - E4, each term estimated from its own n samples.
struct ChshEstimate {
  double s_value = 0.0;
  double stderr_val = 0.0;
  std::array<CorrelationEstimate, 4> terms{};
};

ChshEstimate chsh(const std::array<AnglePair, 4>& settings, int n, std::uint64_t seed,
                  const PhysicalParams& params, const JointOptions& opt = {});

// The paper's arrangement: Z_L, Z'_L, Z'_R coplanar at 120 degrees with
// Z'_L parallel to Z_R. Global angles; each particle's local frame reference
// is the global angle of its own Z axis.
struct BellGeometry {
  double z_left = 0.0;
  double zp_left = 2.0 * 3.14159265358979323846 / 3.0;
  double z_right = 2.0 * 3.14159265358979323846 / 3.0;
  double zp_right = 4.0 * 3.14159265358979323846 / 3.0;
  double left_reference = 0.0;
  double right_reference = 2.0 * 3.14159265358979323846 / 3.0;
};

std::array<AnglePair, 4> paper_chsh_settings();

struct ContradictionReport {
  std::vector<std::pair<std::string, Outcome>> joint_outcomes;  // setting label -> outcome
  std::vector<int> setting_products;   // observed sign product per setting
  std::vector<int> expected_products;  // eigenvalue tuple (empty for two-particle case)
  int product_a = 0;
  int product_b = 0;
  bool contradiction = false;  // product_a != product_b
  bool indeterminate = false;  // some joint outcome was ambiguous
};

// Runs the four settings (Z_L,Z_R), (Z'_L,Z'_R), (Z'_L,Z_R), (Z_L,Z'_R) on
// the same initial sample; product_a from the first two, product_b from the
// last two.
ContradictionReport two_particle_contradiction(const InitialSample& sample,
                                               const PhysicalParams& params,
                                               const BellGeometry& geo = {},
                                               const JointOptions& opt = {});

struct FractionEstimate {
  double fraction = 0.0;  // of all n samples with contradiction == true
  double stderr_val = 0.0;
  int n = 0;
  int n_indeterminate = 0;
};

FractionEstimate contradiction_fraction(int n, std::uint64_t seed, const PhysicalParams& params,
                                        const BellGeometry& geo = {},
                                        const JointOptions& opt = {});

// Runs (xyy, yxy, yyx, xxx) on the same 3-particle sample; product_a is the
// xxx product implied by the first three settings, product_b the observed
// xxx product.
ContradictionReport mermin_check(const InitialSample& sample, const PhysicalParams& params,
                                 const JointOptions& opt = {});

// Runs (xxxx, yxyx, yxxy, xxyy) on the same 4-particle sample; product_a is
// the xxxx product implied by the last three settings, product_b the
// observed xxxx product.
ContradictionReport ghz4_check(const InitialSample& sample, const PhysicalParams& params,
                               const JointOptions& opt = {});

struct UniversalityStats {
  int n = 0;
  int n_indeterminate = 0;
  int n_contradiction = 0;          // determinate samples with contradiction == true
  int n_eigenvalue_violations = 0;  // determinate samples whose products mismatch the tuple
};

UniversalityStats mermin_universality(int n, std::uint64_t seed, const PhysicalParams& params,
                                      const JointOptions& opt = {});
UniversalityStats ghz4_universality(int n, std::uint64_t seed, const PhysicalParams& params,
                                    const JointOptions& opt = {});

// Initial positions studied in the paper's two-particle section.
InitialSample paper_first_positions();     // right particle at 1.1e-3 cm
InitialSample paper_mirrored_positions();  // right particle mirrored, -1e-3 cm

}  // namespace pilotwave
