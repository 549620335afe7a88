#pragma once

#include <string>
#include <vector>

#include "pilotwave/physics.hpp"
#include "pilotwave/velocity.hpp"

// Oracle-equivalence sweep: closed-form branch_velocity against the
// finite-difference density/current oracle over tensor grids spanning
// [-3 dr_t, 3 dr_t] per axis at t in {tau/4, tau/2, tau}, for the singlet at
// theta in {0, 2pi/3}, all four Mermin settings and all four GHZ-4 settings.

namespace pilotwave {

struct OracleGridReport {
  std::string scenario;
  double max_rel_error = 0.0;
  int points = 0;
};

// Relative error per velocity component uses a floor of 1e-5 of the field's
// scale |A(t)| 3 dr_t + |B(t)|, so components passing through zero are
// compared at a matching absolute tolerance.
std::vector<OracleGridReport> oracle_equivalence_report(const PhysicalParams& params,
                                                        int points_per_axis = 10);

double relative_velocity_error(const VelocityVector& closed, const VelocityVector& oracle,
                               double scale);

}  // namespace pilotwave
