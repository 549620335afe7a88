#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pilotwave/physics.hpp"
#include "pilotwave/states.hpp"
#include "pilotwave/velocity.hpp"

// Trajectory integration from t = 0 to tau and attractor-basin
// classification of the outcome at the magnet exit.

namespace pilotwave {

struct StepControl {
  double rtol = 1e-8;
  double atol_over_dr0 = 1e-12;       // absolute tolerance = atol_over_dr0 * delta_r0
  double max_step_fraction = 0.005;   // max step = fraction * tau (tau/200)
  double min_step = 1e-15;            // s, below this a StiffnessError is raised
  int dense_samples = 201;            // uniformly spaced output times over [0, tau]
};

struct TrajectoryPoint {
  double t;                    // s
  std::vector<double> coords;  // cm, per particle
};

struct Trajectory {
  std::vector<TrajectoryPoint> samples;  // t strictly increasing from 0 to tau
  double eps_class = 0.0;                // cm, ambiguity threshold (1e-3 * alpha * tau^2)
  std::uint64_t params_hash = 0;         // identifier of the generating configuration
};

// Step size underflowed; carries the last valid point reached.
struct StiffnessError : std::runtime_error {
  double t_last;
  std::vector<double> coords_last;

  StiffnessError(double t, std::vector<double> coords)
      : std::runtime_error("integrate: step size underflow (stiff velocity field)"),
        t_last(t),
        coords_last(std::move(coords)) {}
};

// Solve dz_i/dt = branch_velocity_i with an adaptive embedded
// Dormand-Prince 5(4) pair. Deterministic: identical inputs produce
// bit-identical samples.
Trajectory integrate(const BranchState& state, const std::vector<double>& initial,
                     const PhysicalParams& params, const StepControl& ctrl = {});

struct Outcome {
  std::vector<int> signs;  // +1/-1 per particle; 0 when ambiguous
  bool ambiguous = false;  // true iff any |z_i(tau)| < eps_class (or exactly 0)
};

// Sign of each coordinate at the final sample.
Outcome classify(const Trajectory& traj);

}  // namespace pilotwave
