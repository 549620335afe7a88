#include <cmath>
#include <cstring>

#include "doctest.h"
#include "pilotwave/dynamics.hpp"
#include "pilotwave/rng.hpp"

using namespace pilotwave;

namespace {

constexpr double kPi = 3.14159265358979323846;

// silver atom with the packet tightened so k*tau = 2 and diffusion is a
// visible effect over the flight
PhysicalParams diffusive_params() {
  PhysicalParams p;
  p.delta_r0 = std::sqrt(p.hbar / (2.0 * p.mass * 2000.0));  // k = 2000 s^-1
  return p;
}

BranchState single_up() {
  BranchState st;
  st.n_particles = 1;
  st.branches = {Branch{1.0, {+1}}};
  return st;
}

}  // namespace

TEST_CASE("free flight (a1 = 0) follows z0 sqrt(1 + k^2 t^2) exactly") {
  for (PhysicalParams p : {silver_atom_params(), diffusive_params()}) {
    p.a1 = 0.0;
    const auto dc = derive_constants(p);
    const std::vector<double> z0 = {1.3 * p.delta_r0, -0.4 * p.delta_r0};
    const Trajectory traj = integrate(singlet_branches(0.0), z0, p);
    REQUIRE(traj.samples.size() == 201);
    for (const auto& pt : traj.samples) {
      const double root = std::sqrt(1.0 + dc.k * dc.k * pt.t * pt.t);
      CHECK(pt.coords[0] == doctest::Approx(z0[0] * root).epsilon(1e-6));
      CHECK(pt.coords[1] == doctest::Approx(z0[1] * root).epsilon(1e-6));
    }
  }
}

TEST_CASE("pure spin-up branch follows alpha t^2 + z0 sqrt(1 + k^2 t^2)") {
  for (const PhysicalParams& p : {silver_atom_params(), diffusive_params()}) {
    const auto dc = derive_constants(p);
    const double z0 = 0.8 * p.delta_r0;
    const Trajectory traj = integrate(single_up(), {z0}, p);
    for (const auto& pt : traj.samples) {
      const double expected =
          dc.alpha * pt.t * pt.t + z0 * std::sqrt(1.0 + dc.k * dc.k * pt.t * pt.t);
      CHECK(pt.coords[0] == doctest::Approx(expected).epsilon(1e-6));
    }
  }
}

TEST_CASE("silver singlet from (1e-3, -1e-3) lands within 2% of +/- alpha tau^2") {
  const PhysicalParams p = silver_atom_params();
  const auto dc = derive_constants(p);
  const Trajectory traj = integrate(singlet_branches(0.0), {1e-3, -1e-3}, p);
  const double target = dc.alpha * p.tau * p.tau;
  CHECK(std::abs(traj.samples.back().coords[0] - target) < 0.02 * target);
  CHECK(std::abs(traj.samples.back().coords[1] + target) < 0.02 * target);
}

TEST_CASE("halving the tolerances moves endpoints by less than 1e-6 dr0") {
  const PhysicalParams p = silver_atom_params();
  const auto st = singlet_branches(2.0 * kPi / 3.0);
  const std::vector<double> z0 = {0.6e-3, -1.1e-3};
  StepControl strict;
  strict.rtol /= 2.0;
  strict.atol_over_dr0 /= 2.0;
  const auto a = integrate(st, z0, p);
  const auto b = integrate(st, z0, p, strict);
  for (std::size_t i = 0; i < z0.size(); ++i) {
    CHECK(std::abs(a.samples.back().coords[i] - b.samples.back().coords[i]) <
          1e-6 * p.delta_r0);
  }
}

TEST_CASE("trajectory samples are strictly ordered, finite, and cover [0, tau]") {
  const PhysicalParams p = silver_atom_params();
  const Trajectory traj = integrate(singlet_branches(0.0), {2e-4, 1e-3}, p);
  CHECK(traj.samples.front().t == 0.0);
  CHECK(traj.samples.back().t == p.tau);
  double prev = -1.0;
  for (const auto& pt : traj.samples) {
    CHECK(pt.t > prev);
    prev = pt.t;
    for (double z : pt.coords) CHECK(std::isfinite(z));
  }
  CHECK(traj.eps_class == doctest::Approx(1e-3 * derive_constants(p).alpha * p.tau * p.tau));
}

TEST_CASE("identical inputs give bit-identical trajectories") {
  const PhysicalParams p = silver_atom_params();
  const auto st = singlet_branches(2.0 * kPi / 3.0);
  const auto a = integrate(st, {0.3e-3, -0.2e-3}, p);
  const auto b = integrate(st, {0.3e-3, -0.2e-3}, p);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(a.params_hash == b.params_hash);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(std::memcmp(a.samples[i].coords.data(), b.samples[i].coords.data(),
                      a.samples[i].coords.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("classification signs, threshold and boundary") {
  const PhysicalParams p = silver_atom_params();
  Trajectory traj = integrate(singlet_branches(0.0), {1e-3, -1e-3}, p);

  Outcome o = classify(traj);
  CHECK(o.signs == std::vector<int>{+1, -1});
  CHECK_FALSE(o.ambiguous);

  // synthetic endpoints exercise the threshold
  traj.samples.back().coords = {0.258, -0.258};
  o = classify(traj);
  CHECK(o.signs == std::vector<int>{+1, -1});

  traj.samples.back().coords = {0.0, -0.258};
  o = classify(traj);
  CHECK(o.ambiguous);
  CHECK(o.signs[0] == 0);
  CHECK(o.signs[1] == -1);

  traj.samples.back().coords = {0.5 * traj.eps_class, -0.258};
  CHECK(classify(traj).ambiguous);
  traj.samples.back().coords = {2.0 * traj.eps_class, -0.258};
  CHECK_FALSE(classify(traj).ambiguous);
}

TEST_CASE("theta=0 outcomes are always opposite over Gaussian initials") {
  const PhysicalParams p = silver_atom_params();
  const auto st = singlet_branches(0.0);
  Rng rng(101);
  int ambiguous = 0;
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> z0 = {p.delta_r0 * rng.normal(), p.delta_r0 * rng.normal()};
    const Outcome o = classify(integrate(st, z0, p));
    if (o.ambiguous) {
      ++ambiguous;
      continue;
    }
    CHECK(o.signs[0] == -o.signs[1]);
  }
  CHECK(ambiguous == 0);
}

TEST_CASE("basin membership is monotone: past 3 spreads the sign is final") {
  const PhysicalParams p = silver_atom_params();
  const auto st = singlet_branches(2.0 * kPi / 3.0);
  Rng rng(103);
  for (int i = 0; i < 50; ++i) {
    const std::vector<double> z0 = {p.delta_r0 * rng.normal(), p.delta_r0 * rng.normal()};
    const Trajectory traj = integrate(st, z0, p);
    const auto final_signs = classify(traj).signs;
    for (const auto& pt : traj.samples) {
      const double spread = spread_at(p, pt.t);
      for (std::size_t j = 0; j < pt.coords.size(); ++j) {
        if (std::abs(pt.coords[j]) > 3.0 * spread && final_signs[j] != 0) {
          CHECK((pt.coords[j] > 0 ? +1 : -1) == final_signs[j]);
        }
      }
    }
  }
}

TEST_CASE("trajectories preserve order along each axis") {
  const PhysicalParams p = silver_atom_params();
  const auto st = singlet_branches(2.0 * kPi / 3.0);

  SUBCASE("varying the left coordinate") {
    double prev = -1e300;
    for (int i = 0; i < 100; ++i) {
      const double zl = -3e-3 + 6e-3 * i / 99.0;
      const auto traj = integrate(st, {zl, 0.4e-3}, p);
      const double zf = traj.samples.back().coords[0];
      CHECK(zf > prev);
      prev = zf;
    }
  }
  SUBCASE("varying the right coordinate") {
    double prev = -1e300;
    for (int i = 0; i < 100; ++i) {
      const double zr = -3e-3 + 6e-3 * i / 99.0;
      const auto traj = integrate(st, {-0.7e-3, zr}, p);
      const double zf = traj.samples.back().coords[1];
      CHECK(zf > prev);
      prev = zf;
    }
  }
}

TEST_CASE("step underflow raises StiffnessError with the last valid point") {
  const PhysicalParams p = silver_atom_params();
  StepControl ctrl;
  ctrl.min_step = 1e-2;  // larger than any step the controller can take
  try {
    integrate(singlet_branches(0.0), {1e-3, -1e-3}, p, ctrl);
    FAIL("expected StiffnessError");
  } catch (const StiffnessError& e) {
    CHECK(e.t_last >= 0.0);
    CHECK(e.t_last < p.tau);
    CHECK(e.coords_last.size() == 2);
  }
}

TEST_CASE("integrate validates its inputs") {
  const PhysicalParams p = silver_atom_params();
  CHECK_THROWS_AS(integrate(singlet_branches(0.0), {1e-3}, p), std::invalid_argument);
  PhysicalParams bad = p;
  bad.tau = 0.0;
  CHECK_THROWS_AS(integrate(singlet_branches(0.0), {1e-3, -1e-3}, bad),
                  std::invalid_argument);
}
