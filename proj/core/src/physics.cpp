#include "pilotwave/physics.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pilotwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* field, const char* what) {
  if (!ok) {
    throw std::invalid_argument(std::string("PhysicalParams: ") + field + " " + what);
  }
}

}  // namespace

void PhysicalParams::validate() const {
  require(std::isfinite(mass) && mass > 0.0, "mass", "must be strictly positive");
  require(std::isfinite(delta_r0) && delta_r0 > 0.0, "delta_r0", "must be strictly positive");
  require(std::isfinite(hbar) && hbar > 0.0, "hbar", "must be strictly positive");
  require(std::isfinite(mu), "mu", "must be finite");
  require(std::isfinite(a0), "a0", "must be finite");
  require(std::isfinite(a1) && a1 >= 0.0, "a1", "must be non-negative");
  require(std::isfinite(v0) && v0 >= 0.0, "v0", "must be non-negative");
  require(std::isfinite(tau) && tau >= 0.0, "tau", "must be non-negative");
}

DerivedConstants derive_constants(const PhysicalParams& p) {
  p.validate();
  DerivedConstants dc;
  dc.k = p.hbar / (2.0 * p.mass * p.delta_r0 * p.delta_r0);
  dc.alpha = p.a1 * p.mu / (2.0 * p.mass);
  dc.beta = p.a1 * p.mu / (p.mass * p.delta_r0 * p.delta_r0);
  return dc;
}

double spread_at(const PhysicalParams& p, double t) {
  const double k = p.hbar / (2.0 * p.mass * p.delta_r0 * p.delta_r0);
  return p.delta_r0 * std::sqrt(1.0 + k * k * t * t);
}

LogAmplitude packet_z_log(const PhysicalParams& p, double z, double t, int spin) {
  assert(spin == 1 || spin == -1);
  const DerivedConstants dc = derive_constants(p);
  const double drt = spread_at(p, t);
  const double center = spin * dc.alpha * t * t;
  const double dev = z - center;

  LogAmplitude out;
  out.center = center;
  out.spread = drt;
  out.log_modulus = -0.25 * std::log(2.0 * kPi * drt * drt) - dev * dev / (4.0 * drt * drt);
  out.phase = dc.k * t * dev * dev / (4.0 * drt * drt)
            - 0.5 * std::acos(std::min(1.0, p.delta_r0 / drt))
            + spin * (p.mu * t / p.hbar) * (p.a0 + p.a1 * z)
            - p.mu * p.mu * p.a1 * p.a1 * t * t * t / (6.0 * p.mass * p.hbar);
  return out;
}

PacketValue packet_z(const PhysicalParams& p, double z, double t, int spin) {
  const LogAmplitude la = packet_z_log(p, z, t, spin);
  return PacketValue{std::polar(std::exp(la.log_modulus), la.phase), la.center, la.spread};
}

LogAmplitude packet_free_log(const PhysicalParams& p, double u, double t, double v_drift) {
  const double k = p.hbar / (2.0 * p.mass * p.delta_r0 * p.delta_r0);
  const double drt = spread_at(p, t);
  const double center = v_drift * t;
  const double dev = u - center;

  LogAmplitude out;
  out.center = center;
  out.spread = drt;
  out.log_modulus = -0.25 * std::log(2.0 * kPi * drt * drt) - dev * dev / (4.0 * drt * drt);
  out.phase = k * t * dev * dev / (4.0 * drt * drt)
            - 0.5 * std::acos(std::min(1.0, p.delta_r0 / drt))
            + (p.mass * v_drift / p.hbar) * u
            - (p.mass * v_drift * v_drift / (2.0 * p.hbar)) * t;
  return out;
}

PacketValue packet_free(const PhysicalParams& p, double u, double t, double v_drift) {
  const LogAmplitude la = packet_free_log(p, u, t, v_drift);
  return PacketValue{std::polar(std::exp(la.log_modulus), la.phase), la.center, la.spread};
}

double post_magnet_center(const PhysicalParams& p, int spin, double t) {
  assert(spin == 1 || spin == -1);
  if (t < p.tau) {
    throw std::domain_error("post_magnet_center: t < tau (particle still inside the magnet)");
  }
  const DerivedConstants dc = derive_constants(p);
  return spin * (dc.alpha * p.tau * p.tau + 2.0 * dc.alpha * p.tau * (t - p.tau));
}

}  // namespace pilotwave
