#pragma once
// Free motion of a nonholonomic system: geodesics of the projected
// connection, with velocities carried in the frame of V.

#include <cstddef>
#include <vector>

#include "nhcurv/system.hpp"

namespace nhcurv {

/// Configuration and frame velocity: dq/dt = u^a e_a.
struct State {
  Point q;
  std::vector<double> u;
};

struct Rates {
  std::vector<double> qdot;
  std::vector<double> udot;
};

/// Which connection coefficients drive the velocity equation.
enum class ConnectionPath {
  frame,    // nonholonomic connection from the frame and induced metric
  ambient,  // projected ambient Levi-Civita connection
};

/// qdot^i = B^i_a u^a, udot^c = -Gamma^c_ab u^a u^b.
Rates geodesic_rhs(const SystemDef& sys, const State& s,
                   ConnectionPath path = ConnectionPath::frame);

/// (1/2) g_ab u^a u^b.
double kinetic_energy(const SystemDef& sys, const State& s);

/// Largest |omega_p(qdot)| over the complement coframe rows, each row
/// normalized to unit Euclidean length.
double constraint_residual(const SystemDef& sys, const Point& q,
                           const std::vector<double>& qdot);

struct TrajectorySample {
  double t = 0.0;
  State state;
  double energy = 0.0;
  double residual = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double energy0 = 0.0;
  double max_energy_drift = 0.0;  // max |E(t) - E(0)| / E(0) over all steps
  double max_residual = 0.0;      // over all steps
  State final_state;
};

/// Classical RK4 with fixed step; the last step is shortened to land on
/// t_end. Keeps every `sample_every`-th step (and the endpoint).
Trajectory integrate_trajectory(const SystemDef& sys, const State& s0, double t_end,
                                double dt, std::size_t sample_every = 1);

}  // namespace nhcurv
