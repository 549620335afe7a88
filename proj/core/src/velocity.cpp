#include "pilotwave/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace pilotwave {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kMaxBranches = 16;  // <= 2^4 distinct patterns for <= 4 particles

}  // namespace

void branch_velocity_into(const BranchState& state, std::span<const double> coords,
                          double t, const DerivedConstants& dc, std::span<double> out) {
  const std::size_t n = coords.size();
  if (state.branches.empty()) throw std::invalid_argument("branch_velocity: empty branch list");
  if (static_cast<int>(n) != state.n_particles || out.size() != n) {
    throw std::invalid_argument("branch_velocity: coordinate count mismatch");
  }
  if (state.branches.size() > kMaxBranches) {
    throw std::invalid_argument("branch_velocity: too many branches");
  }

  const double t2 = t * t;
  const double den = 1.0 + dc.k * dc.k * t2;
  const double diffusion = dc.k * dc.k * t / den;
  const double drift = 2.0 * dc.alpha * t - dc.k * dc.k * dc.alpha * t2 * t / den;
  const double tilt = dc.beta * t2 / den;

  // log-weighted exponents, max subtracted before exponentiating
  double expw[kMaxBranches];
  double emax = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < state.branches.size(); ++b) {
    const Branch& br = state.branches[b];
    double signed_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) signed_sum += br.pattern[j] * coords[j];
    expw[b] = 0.5 * tilt * signed_sum + std::log(br.weight);
    emax = std::max(emax, expw[b]);
  }
  double denom = 0.0;
  for (std::size_t b = 0; b < state.branches.size(); ++b) {
    expw[b] = std::exp(expw[b] - emax);
    denom += expw[b];
  }

  for (std::size_t i = 0; i < n; ++i) {
    double num = 0.0;
    for (std::size_t b = 0; b < state.branches.size(); ++b) {
      num += state.branches[b].pattern[i] * expw[b];
    }
    double r = num / denom;
    if (!(std::abs(r) <= 1.0 + 1e-9)) {
      throw std::logic_error("branch_velocity: R outside [-1, 1]");
    }
    r = std::clamp(r, -1.0, 1.0);
    out[i] = diffusion * coords[i] + r * drift;
  }
}

VelocityVector branch_velocity(const BranchState& state, const PhaseSpacePoint& p,
                               const DerivedConstants& dc) {
  VelocityVector result;
  result.v.resize(p.coords.size());
  branch_velocity_into(state, p.coords, p.t, dc, result.v);
  return result;
}

double transverse_velocity(double u, double t, const DerivedConstants& dc, double v_drift) {
  const double den = 1.0 + dc.k * dc.k * t * t;
  return v_drift + dc.k * dc.k * t / den * (u - v_drift * t);
}

VelocityVector numeric_velocity_oracle(const BranchState& state, const PhysicalParams& p,
                                       const PhaseSpacePoint& point) {
  state.validate();
  const std::size_t n = point.coords.size();
  if (static_cast<int>(n) != state.n_particles) {
    throw std::invalid_argument("numeric_velocity_oracle: coordinate count mismatch");
  }
  const double t = point.t;
  const double drt = spread_at(p, t);
  const double h = 1e-6 * drt;

  // Per particle and spin sign, packet values at z, z-h, z+h. Branch
  // amplitudes are then products over particles.
  struct PacketEval {
    double g[3];   // log modulus at z, z-h, z+h
    double ph[3];  // phase
  };
  std::vector<PacketEval> eval(2 * n);  // [2*i + (spin<0)]
  for (std::size_t i = 0; i < n; ++i) {
    for (int sidx = 0; sidx < 2; ++sidx) {
      const int spin = sidx == 0 ? +1 : -1;
      const double z = point.coords[i];
      const LogAmplitude a0 = packet_z_log(p, z, t, spin);
      const LogAmplitude am = packet_z_log(p, z - h, t, spin);
      const LogAmplitude ap = packet_z_log(p, z + h, t, spin);
      eval[2 * i + sidx] = PacketEval{{a0.log_modulus, am.log_modulus, ap.log_modulus},
                                      {a0.phase, am.phase, ap.phase}};
    }
  }

  const std::size_t nb = state.branches.size();
  // Branch log-amplitude at the stencil point where particle `shift_i` is
  // displaced by stencil slot `slot` (0 center, 1 minus, 2 plus).
  auto branch_log = [&](std::size_t b, std::size_t shift_i, int slot, double& g, double& ph) {
    g = 0.0;
    ph = 0.0;
    const Branch& br = state.branches[b];
    for (std::size_t j = 0; j < n; ++j) {
      const int sidx = br.pattern[j] > 0 ? 0 : 1;
      const int s = (j == shift_i) ? slot : 0;
      g += eval[2 * j + sidx].g[s];
      ph += eval[2 * j + sidx].ph[s];
    }
  };

  // Common scale: max log modulus over branches at the center point. The
  // subtraction cancels exactly in J/rho.
  double gmax = -std::numeric_limits<double>::infinity();
  std::vector<double> gc(nb), phc(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    branch_log(b, 0, 0, gc[b], phc[b]);
    gmax = std::max(gmax, gc[b]);
  }

  double rho = 0.0;
  std::vector<std::complex<double>> center(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    center[b] = std::polar(std::exp(gc[b] - gmax), phc[b]);
    rho += state.branches[b].weight * std::norm(center[b]);
  }

  // Node floor: density relative to the all-packets-at-their-centers peak.
  const double log_peak = -static_cast<double>(n) * 0.5 * std::log(2.0 * kPi * drt * drt);
  const double log_rho = std::log(rho) + 2.0 * gmax;
  if (!(log_rho - log_peak > std::log(1e-300))) {
    throw NodeProximityError("numeric_velocity_oracle: density below 1e-300 of peak");
  }

  VelocityVector out;
  out.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double current = 0.0;  // Im(Psi^dag d_i Psi), branch-orthogonal sum
    for (std::size_t b = 0; b < nb; ++b) {
      double gm, phm, gp, php;
      branch_log(b, i, 1, gm, phm);
      branch_log(b, i, 2, gp, php);
      const std::complex<double> cm = std::polar(std::exp(gm - gmax), phm);
      const std::complex<double> cp = std::polar(std::exp(gp - gmax), php);
      const std::complex<double> grad = (cp - cm) / (2.0 * h);
      current += state.branches[b].weight * std::imag(std::conj(center[b]) * grad);
    }
    out.v[i] = p.hbar / p.mass * current / rho;
  }
  return out;
}

PhysicalParams oracle_check_params() {
  PhysicalParams p;  // silver-atom defaults
  p.a1 = 6.0;        // G/cm
  p.delta_r0 = 7.6e-5;  // cm
  return p;
}

}  // namespace pilotwave
