#pragma once

// Adapted frames at a point, Lie brackets, induced metrics, orthogonal
// projectors and the flag of the distribution.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "nhcurv/linalg.hpp"
#include "nhcurv/system.hpp"

namespace nhcurv {

/// Frame, ambient metric and coframe as jets at one point.
struct FrameEval {
  Point point;
  std::vector<double> params;
  std::vector<std::size_t> levels;
  int order = 0;
  JetMatrix B;        // B[a][i] = B^i_a, rows are e_a
  JetMatrix G;        // G[i][j]
  JetMatrix coframe;  // W[a][i] with sum_i W[a][i] B[b][i] = delta_ab

  std::size_t dim() const noexcept { return B.size(); }
  std::size_t rank() const noexcept { return levels.front(); }
  int degree() const noexcept { return static_cast<int>(levels.size()) - 1; }
  /// First index of level block i (0 for V_0).
  std::size_t block_begin(int i) const { return i == 0 ? 0 : levels[i - 1]; }
  std::size_t block_end(int i) const { return levels[i]; }
};

struct FrameOptions {
  double rank_tol = 1e-8;
  /// Relative tolerance on G(e_a, e_p) across level blocks.
  double orthogonality_tol = 1e-9;
};

/// Evaluates the declared frame (or generates the complement) at order D,
/// checking rank, positive definiteness and block orthogonality.
FrameEval evaluate_frame(const SystemDef& sys, const Point& q, int order,
                         const FrameOptions& opt = {});

/// e_a(f) = B^i_a d_i f, one order lower.
Jet frame_derivative(const FrameEval& fe, std::size_t a, const Jet& f);

/// [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i, one order lower.
JetVector lie_bracket(const JetVector& X, const JetVector& Y);

/// Applies a vector field to a scalar: X(f) = X^i d_i f.
Jet apply_field(const JetVector& X, const Jet& f);

/// g_ab = G(e_a, e_b) for a, b < n_i.
JetMatrix induced_metric(const FrameEval& fe, int level);

/// Ambient-orthogonal projector onto V_i in coordinates, with q = 1 - p.
struct ProjectorPair {
  int level = 0;
  Eigen::MatrixXd p;       // n x n, acting on coordinate vectors
  Eigen::MatrixXd q;       // n x n
  Eigen::MatrixXd p_cols;  // n x n_i, p(d_i) = p_cols(i, a) e_a
  Eigen::MatrixXd q_cols;  // n x (n - n_i), q(d_i) = q_cols(i, r) e_{n_i + r}
};
ProjectorPair orthogonal_projectors(const FrameEval& fe, int level);

struct FlagReport {
  std::vector<std::size_t> dims;
  int degree = 0;
  /// Smallest relative singular value seen when accepting a direction.
  double weakest_direction = 0.0;
};

/// Computes the flag by bracketing with V's generators and checks the
/// declared levels and frame against it.
FlagReport flag_at_point(const SystemDef& sys, const Point& q,
                         double rank_tol = 1e-8);

/// Numerical rank of the rows of `m` relative to the largest singular value.
std::size_t numerical_rank(const Eigen::MatrixXd& m, double rank_tol);

}  // namespace nhcurv
