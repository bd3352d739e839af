#pragma once

// Nonholonomic metric connection on V and the Schouten curvature.
//
// Index layout (0-based, conventional order):
//   C(c, a, b)       [e_a, e_b] = C^c_ab e_c
//   gamma(c, a, b)   nabla_{e_a} e_b = Gamma^c_ab e_c
//   K(d, a, b, c)    K^d_abc, antisymmetric in (a, b)

#include <cstddef>
#include <string>

#include "nhcurv/array.hpp"
#include "nhcurv/geometry.hpp"

namespace nhcurv {

using JetArray = Array<Jet>;
using RealArray = Array<double>;

RealArray values(const JetArray& a);

/// C^c_ab for all n frame indices, via the coframe.
JetArray structure_functions(const FrameEval& fe);

struct ConnectionTable {
  std::size_t m = 0;
  std::size_t n = 0;
  JetArray C;       // n x n x n
  JetMatrix g;      // m x m induced metric
  JetMatrix ginv;   // m x m
  JetArray braces;  // m x m x m, Christoffel symbols of g in the frame
  JetArray omega;   // m x m x m, Omega^c_ab = -C^c_ab / 2
  JetArray gamma;   // m x m x m
  JetArray lambda;  // m x n x m, Lambda^d_pc for complement p (zero for p < m)
  JetArray M;       // n x m x m, M^p_ab for p >= m (zero for p < m)
};

ConnectionTable nonholonomic_connection(const FrameEval& fe);

/// Values plus index roles of a curvature-type tensor K^d_abc.
struct CurvatureBlock {
  std::string name;
  int level = 0;
  std::size_t slots = 0;  // range of a, b
  std::size_t m = 0;      // range of c, d
  RealArray components;   // (d, a, b, c)

  double operator()(std::size_t d, std::size_t a, std::size_t b, std::size_t c) const {
    return components(d, a, b, c);
  }
  double max_abs() const;
};

/// Curvature of a connection table Pi(d, a, c) (a < slots) at level with
/// slot range `slots`:
///   K^d_abc = e_a Pi^d_bc - e_b Pi^d_ac + Pi^d_ae Pi^e_bc - Pi^d_be Pi^e_ac
///             - C^f_ab Pi^d_fc (f < slots) - C^p_ab C^d_pc (p >= slots).
JetArray level_curvature_jets(const FrameEval& fe, const JetArray& C,
                              const JetArray& pi, std::size_t slots);

JetArray schouten_jets(const FrameEval& fe, const ConnectionTable& ct);
CurvatureBlock schouten_tensor(const FrameEval& fe, const ConnectionTable& ct);

/// Projected ambient Levi-Civita connection on V, values (c, a, b).
RealArray projected_connection_from_ambient(const FrameEval& fe);

/// Ambient Levi-Civita Christoffel symbols Gamma^k_ij, values (k, i, j).
RealArray ambient_christoffel(const FrameEval& fe);

}  // namespace nhcurv
