#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "pilotwave/physics.hpp"
#include "pilotwave/states.hpp"

// Bohmian velocity fields inside the magnets for 1-4 entangled particles.
//
// For particle i at magnet-axis coordinates z and time t:
//
//   v_i = k^2 t/(1+k^2 t^2) * z_i + R_i * (2 alpha t - k^2 alpha t^3/(1+k^2 t^2))
//
// where R_i is the branch-weighted sign average under the exponential tilt
//
//   R_i = sum_b w_b s_i(b) exp(E_b) / sum_b w_b exp(E_b),
//   E_b = beta t^2/(1+k^2 t^2) * (sum_j s_j(b) z_j) / 2.
//
// E_b reaches several hundred at silver-atom parameters, so the branch sums
// are evaluated in log space with the maximum exponent subtracted.

namespace pilotwave {

struct PhaseSpacePoint {
  std::vector<double> coords;  // per-particle magnet-axis coordinate, cm
  double t = 0.0;              // s, in [0, tau]
};

struct VelocityVector {
  std::vector<double> v;  // cm s^-1, per particle along its magnet axis
};

// Raised by the numeric oracle when the density at the requested point is
// below 1e-300 of its peak (too close to a wavefunction node to divide).
struct NodeProximityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Allocation-free form used by the integrator; `out` must have one slot per
// particle. Throws std::invalid_argument on empty branch list or mismatched
// coordinate count, std::logic_error if a computed R_i leaves [-1, 1].
void branch_velocity_into(const BranchState& state, std::span<const double> coords,
                          double t, const DerivedConstants& dc, std::span<double> out);

VelocityVector branch_velocity(const BranchState& state, const PhaseSpacePoint& p,
                               const DerivedConstants& dc);

// Free transverse/longitudinal velocity: v_drift + k^2 t/(1+k^2 t^2) (u - v_drift t).
double transverse_velocity(double u, double t, const DerivedConstants& dc, double v_drift);

// Definition-level check of branch_velocity: assembles the branch-weighted
// multi-particle wavefunction from packet_z (full phases, including the a0
// and cubic terms that cancel in J/rho), evaluates density and current by
// central finite differences with step h = 1e-6 * dr_t, and returns J/rho
// along each magnet axis. Independent of the closed-form R path.
VelocityVector numeric_velocity_oracle(const BranchState& state, const PhysicalParams& p,
                                       const PhaseSpacePoint& point);

// Parameter set used for oracle-equivalence runs: silver-atom mass, coupling
// and time of flight with a weaker gradient (a1 = 6 G/cm) and tighter packet
// (dr0 = 7.6e-5 cm), so k*tau ~ 0.5, the deflection alpha*tau^2 ~ 2*dr0, and
// branch exponents stay O(10) on the test grids where the stated
// finite-difference step resolves the phase to well below 1e-6 relative.
PhysicalParams oracle_check_params();

}  // namespace pilotwave
