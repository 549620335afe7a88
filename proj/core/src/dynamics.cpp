#include "pilotwave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace pilotwave {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights (Hairer's DOPRI5 contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t hash_configuration(const BranchState& state, const std::vector<double>& initial,
                                 const PhysicalParams& p, const StepControl& ctrl) {
  std::uint64_t h = 14695981039346656037ULL;
  const double fields[] = {p.mass, p.mu, p.a0, p.a1, p.delta_r0, p.v0, p.tau, p.hbar,
                           ctrl.rtol, ctrl.atol_over_dr0, ctrl.max_step_fraction, ctrl.min_step,
                           static_cast<double>(ctrl.dense_samples)};
  h = fnv1a(fields, sizeof(fields), h);
  for (const auto& b : state.branches) {
    h = fnv1a(&b.weight, sizeof(b.weight), h);
    for (int s : b.pattern) h = fnv1a(&s, sizeof(s), h);
  }
  for (double z : initial) h = fnv1a(&z, sizeof(z), h);
  return h;
}

}  // namespace

Trajectory integrate(const BranchState& state, const std::vector<double>& initial,
                     const PhysicalParams& params, const StepControl& ctrl) {
  state.validate();
  params.validate();
  if (static_cast<int>(initial.size()) != state.n_particles) {
    throw std::invalid_argument("integrate: initial coordinate count mismatch");
  }
  if (params.tau <= 0.0) throw std::invalid_argument("integrate: tau must be positive");
  const DerivedConstants dc = derive_constants(params);
  const std::size_t n = initial.size();
  const double tau = params.tau;
  const double atol = ctrl.atol_over_dr0 * params.delta_r0;
  const double max_step = ctrl.max_step_fraction * tau;
  const int nout = std::max(2, ctrl.dense_samples);

  Trajectory traj;
  traj.eps_class = 1e-3 * dc.alpha * tau * tau;
  traj.params_hash = hash_configuration(state, initial, params, ctrl);
  traj.samples.reserve(nout);

  std::vector<double> y = initial;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y1(n);
  std::vector<double> rcont1(n), rcont2(n), rcont3(n), rcont4(n), rcont5(n);

  auto rhs = [&](double t, const std::vector<double>& z, std::vector<double>& dz) {
    branch_velocity_into(state, z, t, dc, dz);
  };

  double t = 0.0;
  rhs(t, y, k1);
  traj.samples.push_back(TrajectoryPoint{0.0, y});
  int next_out = 1;  // next dense index to emit

  double h = std::min(max_step, tau / 1000.0);
  while (t < tau) {
    if (tau - t <= 1e-14 * tau) break;  // remaining gap is roundoff
    h = std::min(h, tau - t);

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, y1, k7);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = atol + ctrl.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
      err += (ei / sc) * (ei / sc);
      finite = finite && std::isfinite(y1[i]);
    }
    err = std::sqrt(err / static_cast<double>(n));
    if (!finite) err = 1e10;

    if (err <= 1.0) {
      // dense output over [t, t+h]
      for (std::size_t i = 0; i < n; ++i) {
        const double ydiff = y1[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        rcont1[i] = y[i];
        rcont2[i] = ydiff;
        rcont3[i] = bspl;
        rcont4[i] = ydiff - h * k7[i] - bspl;
        rcont5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                         d7 * k7[i]);
      }
      const double t_new = t + h;
      while (next_out < nout - 1) {
        const double tout = tau * next_out / (nout - 1);
        if (tout > t_new) break;
        const double theta = (tout - t) / h;
        const double th1 = 1.0 - theta;
        std::vector<double> yout(n);
        for (std::size_t i = 0; i < n; ++i) {
          yout[i] = rcont1[i] +
                    theta * (rcont2[i] + th1 * (rcont3[i] + theta * (rcont4[i] + th1 * rcont5[i])));
        }
        traj.samples.push_back(TrajectoryPoint{tout, std::move(yout)});
        ++next_out;
      }

      t = t_new;
      y.swap(y1);
      k1.swap(k7);  // FSAL
      if (t >= tau) break;
      const double fac = std::clamp(0.9 * std::pow(err > 0.0 ? err : 1e-10, -0.2), 0.2, 5.0);
      h = std::min(h * fac, max_step);
    } else {
      const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      h *= fac;
    }
    if (h < ctrl.min_step) throw StiffnessError(t, y);
  }

  traj.samples.push_back(TrajectoryPoint{tau, y});
  return traj;
}

Outcome classify(const Trajectory& traj) {
  if (traj.samples.empty()) throw std::invalid_argument("classify: empty trajectory");
  const TrajectoryPoint& last = traj.samples.back();
  Outcome out;
  out.signs.resize(last.coords.size());
  for (std::size_t i = 0; i < last.coords.size(); ++i) {
    const double z = last.coords[i];
    if (std::abs(z) < traj.eps_class || z == 0.0) {
      out.ambiguous = true;
      out.signs[i] = 0;
    } else {
      out.signs[i] = z > 0.0 ? +1 : -1;
    }
  }
  return out;
}

}  // namespace pilotwave
