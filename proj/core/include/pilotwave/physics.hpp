#pragma once

#include <complex>

// Physical parameters and the analytic single-particle wavepacket solutions
// for a neutral spin-1/2 particle crossing a constant-gradient Stern-Gerlach
// magnet. CGS units throughout (cm, g, s, Gauss, erg); no conversion layer.

namespace pilotwave {

struct PhysicalParams {
  double mass = 1.80e-22;    // g
  double mu = 9.27e-21;      // g cm^2 s^-2 G^-1, gyromagnetic coupling
  double a0 = 0.0;           // G, uniform field component (global phase only)
  double a1 = 1.0e4;         // G cm^-1, field gradient
  double delta_r0 = 1.0e-3;  // cm, initial packet spread (per axis)
  double v0 = 1.0e4;         // cm s^-1, longitudinal speed
  double tau = 1.0e-3;       // s, time of flight through the magnet
  double hbar = 1.05e-27;    // erg s

  // Throws std::invalid_argument naming the offending field.
  // mass, delta_r0, hbar must be strictly positive; a1, v0, tau non-negative.
  void validate() const;
};

// Defaults above are the silver-atom experiment; a convenience spelling.
inline PhysicalParams silver_atom_params() { return PhysicalParams{}; }

struct DerivedConstants {
  double k;      // s^-1, diffusion rate hbar / (2 m dr0^2)
  double alpha;  // cm s^-2, half classical acceleration a1 mu / (2 m)
  double beta;   // cm^-1 s^-2, a1 mu / (m dr0^2); beta == 2 alpha / dr0^2
};

DerivedConstants derive_constants(const PhysicalParams& p);

// Packet spread dr_t = dr0 sqrt(1 + k^2 t^2).
double spread_at(const PhysicalParams& p, double t);

struct PacketValue {
  std::complex<double> amplitude;  // cm^-1/2
  double center;                   // cm
  double spread;                   // cm
};

// Same packet value in log form: amplitude = exp(log_modulus + i*phase).
// Stays representable where the linear form would under/overflow (the
// Gaussian tails reach e^-30000 at silver-atom deflections).
struct LogAmplitude {
  double log_modulus;
  double phase;  // radians, unwrapped
  double center;
  double spread;
};

// z-axis factor of the in-magnet solution for spin = +1 or -1: a normalized
// Gaussian of spread dr_t centered at spin*alpha*t^2 carrying the diffusion
// phase k t (z-c)^2 / (4 dr_t^2), the Gouy phase -acos(dr0/dr_t)/2, the
// magnetic phase spin*(mu t/hbar)(a0 + a1 z) and the cubic phase
// -mu^2 a1^2 t^3 / (6 m hbar). Valid for 0 <= t <= tau.
PacketValue packet_z(const PhysicalParams& p, double z, double t, int spin);
LogAmplitude packet_z_log(const PhysicalParams& p, double z, double t, int spin);

// Free Gaussian factor drifting at v_drift: the x factor of the solution for
// v_drift = v0, the y factor for v_drift = 0.
PacketValue packet_free(const PhysicalParams& p, double u, double t, double v_drift);
LogAmplitude packet_free_log(const PhysicalParams& p, double u, double t, double v_drift);

// Center of a spin branch after leaving the magnet: uniform translation at
// the exit speed 2 alpha tau, i.e. spin*(alpha tau^2 + 2 alpha tau (t-tau)).
// Throws std::domain_error for t < tau.
double post_magnet_center(const PhysicalParams& p, int spin, double t);

}  // namespace pilotwave
