#include "nhcurv/mechanics.hpp"

#include <algorithm>
#include <cmath>

#include "nhcurv/connection.hpp"
#include "nhcurv/errors.hpp"
#include "nhcurv/geometry.hpp"

namespace nhcurv {
namespace {

void check_state(const SystemDef& sys, const State& s) {
  if (s.q.size() != sys.dim()) {
    throw UsageError("expected " + std::to_string(sys.dim()) + " coordinates, got " +
                     std::to_string(s.q.size()));
  }
  if (s.u.size() != sys.rank()) {
    throw UsageError("expected " + std::to_string(sys.rank()) + " frame velocities, got " +
                     std::to_string(s.u.size()));
  }
  for (double x : s.q) {
    if (!std::isfinite(x)) throw NumericalError("non-finite coordinate");
  }
  for (double x : s.u) {
    if (!std::isfinite(x)) throw NumericalError("non-finite velocity");
  }
}

State axpy(const State& s, double h, const Rates& r) {
  State out = s;
  for (std::size_t i = 0; i < out.q.size(); ++i) out.q[i] += h * r.qdot[i];
  for (std::size_t a = 0; a < out.u.size(); ++a) out.u[a] += h * r.udot[a];
  return out;
}

}  // namespace

Rates geodesic_rhs(const SystemDef& sys, const State& s, ConnectionPath path) {
  check_state(sys, s);
  const FrameEval fe = evaluate_frame(sys, s.q, 1);
  const std::size_t n = sys.dim();
  const std::size_t m = sys.rank();

  RealArray gamma;
  if (path == ConnectionPath::frame) {
    gamma = values(nonholonomic_connection(fe).gamma);
  } else {
    gamma = projected_connection_from_ambient(fe);
  }

  Rates r;
  r.qdot.assign(n, 0.0);
  r.udot.assign(m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t i = 0; i < n; ++i) r.qdot[i] += fe.B[a][i].value() * s.u[a];
  }
  for (std::size_t c = 0; c < m; ++c) {
    double acc = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) acc += gamma(c, a, b) * s.u[a] * s.u[b];
    }
    r.udot[c] = -acc;
  }
  return r;
}

namespace {

struct Monitors {
  double energy = 0.0;
  double residual = 0.0;
};

Monitors monitors(const SystemDef& sys, const State& s, const std::vector<double>& qdot) {
  const FrameEval fe = evaluate_frame(sys, s.q, 0);
  const Eigen::MatrixXd g = values(induced_metric(fe, 0));
  const Eigen::Map<const Eigen::VectorXd> u(s.u.data(), static_cast<Eigen::Index>(s.u.size()));
  Monitors out;
  out.energy = 0.5 * u.dot(g * u);
  if (qdot.empty()) return out;
  const Eigen::MatrixXd W = values(fe.coframe);
  const Eigen::Map<const Eigen::VectorXd> v(qdot.data(), static_cast<Eigen::Index>(qdot.size()));
  for (auto p = static_cast<Eigen::Index>(sys.rank()); p < W.rows(); ++p) {
    const auto row = W.row(p);
    out.residual = std::max(out.residual, std::abs(row.dot(v)) / row.norm());
  }
  return out;
}

}  // namespace

double kinetic_energy(const SystemDef& sys, const State& s) {
  check_state(sys, s);
  return monitors(sys, s, {}).energy;
}

double constraint_residual(const SystemDef& sys, const Point& q,
                           const std::vector<double>& qdot) {
  if (qdot.size() != sys.dim()) throw UsageError("velocity has the wrong dimension");
  State s{q, std::vector<double>(sys.rank(), 0.0)};
  return monitors(sys, s, qdot).residual;
}

Trajectory integrate_trajectory(const SystemDef& sys, const State& s0, double t_end,
                                double dt, std::size_t sample_every) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw UsageError("time step must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw UsageError("end time must be non-negative");
  if (sample_every == 0) sample_every = 1;
  check_state(sys, s0);

  Trajectory tr;
  tr.energy0 = kinetic_energy(sys, s0);
  const double e_scale = tr.energy0 > 0.0 ? tr.energy0 : 1.0;

  auto record = [&](double t, const State& s, const Rates& r, bool keep) {
    const Monitors mon = monitors(sys, s, r.qdot);
    const double e = mon.energy;
    const double res = mon.residual;
    tr.max_energy_drift = std::max(tr.max_energy_drift, std::abs(e - tr.energy0) / e_scale);
    tr.max_residual = std::max(tr.max_residual, res);
    if (keep) tr.samples.push_back({t, s, e, res});
  };

  State s = s0;
  Rates k1 = geodesic_rhs(sys, s);
  record(0.0, s, k1, true);

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  double t = 0.0;
  for (std::size_t step = 1; step <= steps; ++step) {
    const double h = std::min(dt, t_end - t);
    const Rates k2 = geodesic_rhs(sys, axpy(s, 0.5 * h, k1));
    const Rates k3 = geodesic_rhs(sys, axpy(s, 0.5 * h, k2));
    const Rates k4 = geodesic_rhs(sys, axpy(s, h, k3));
    for (std::size_t i = 0; i < s.q.size(); ++i) {
      s.q[i] += h / 6.0 * (k1.qdot[i] + 2.0 * k2.qdot[i] + 2.0 * k3.qdot[i] + k4.qdot[i]);
    }
    for (std::size_t a = 0; a < s.u.size(); ++a) {
      s.u[a] += h / 6.0 * (k1.udot[a] + 2.0 * k2.udot[a] + 2.0 * k3.udot[a] + k4.udot[a]);
    }
    t = step == steps ? t_end : t + h;
    k1 = geodesic_rhs(sys, s);
    record(t, s, k1, step % sample_every == 0 || step == steps);
  }
  tr.final_state = s;
  return tr;
}

}  // namespace nhcurv
