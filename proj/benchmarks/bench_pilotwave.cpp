#include <benchmark/benchmark.h>

#include "pilotwave/dynamics.hpp"
#include "pilotwave/experiments.hpp"
#include "pilotwave/velocity.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

using namespace pilotwave;

void BM_BranchVelocitySinglet(benchmark::State& state) {
  const PhysicalParams p = silver_atom_params();
  const auto dc = derive_constants(p);
  const auto st = singlet_branches(2.0 * kPi / 3.0);
  std::vector<double> coords = {0.7e-3, -0.4e-3};
  std::vector<double> out(2);
  for (auto _ : state) {
    branch_velocity_into(st, coords, 0.5 * p.tau, dc, out);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_BranchVelocitySinglet);

void BM_BranchVelocityGhz4(benchmark::State& state) {
  const PhysicalParams p = silver_atom_params();
  const auto dc = derive_constants(p);
  const auto st = ghz4_branches(Ghz4Setting::xxxx);
  std::vector<double> coords = {0.7e-3, -0.4e-3, 1.2e-3, -0.1e-3};
  std::vector<double> out(4);
  for (auto _ : state) {
    branch_velocity_into(st, coords, 0.5 * p.tau, dc, out);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_BranchVelocityGhz4);

void BM_NumericOracleSinglet(benchmark::State& state) {
  const PhysicalParams p = oracle_check_params();
  const auto st = singlet_branches(2.0 * kPi / 3.0);
  const PhaseSpacePoint pt{{0.7e-4, -0.4e-4}, 0.5 * p.tau};
  for (auto _ : state) {
    benchmark::DoNotOptimize(numeric_velocity_oracle(st, p, pt));
  }
}
BENCHMARK(BM_NumericOracleSinglet);

void BM_IntegrateSinglet(benchmark::State& state) {
  const PhysicalParams p = silver_atom_params();
  const auto st = singlet_branches(2.0 * kPi / 3.0);
  const std::vector<double> z0 = {0.6e-3, -1.1e-3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(st, z0, p));
  }
}
BENCHMARK(BM_IntegrateSinglet);

void BM_IntegrateGhz4(benchmark::State& state) {
  const PhysicalParams p = silver_atom_params();
  const auto st = ghz4_branches(Ghz4Setting::xxxx);
  const std::vector<double> z0 = {0.6e-3, -1.1e-3, 0.2e-3, 1.4e-3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(st, z0, p));
  }
}
BENCHMARK(BM_IntegrateGhz4);

void BM_MerminCheck(benchmark::State& state) {
  const PhysicalParams p = silver_atom_params();
  const auto samples = sample_initials(16, p.delta_r0, 3, 7);
  JointOptions opt;
  opt.threads = 1;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mermin_check(samples[i++ % samples.size()], p, opt));
  }
}
BENCHMARK(BM_MerminCheck);

void BM_SampleInitials(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_initials(1000, 1e-3, 2, 42));
  }
}
BENCHMARK(BM_SampleInitials);

}  // namespace

BENCHMARK_MAIN();
