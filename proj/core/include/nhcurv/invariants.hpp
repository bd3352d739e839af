#pragma once
// Residuals of identities the pipeline must satisfy. Each returns the
// largest absolute violation over all components at the point.

#include <string>
#include <vector>

#include "nhcurv/wagner.hpp"

namespace nhcurv {

/// Gamma^c_ab - Gamma^c_ba + 2 Omega^c_ab.
double torsion_residual(const ConnectionTable& ct);

/// e_c(g_ab) - Gamma^e_ca g_eb - Gamma^e_cb g_ae.
double metric_compatibility_residual(const FrameEval& fe, const ConnectionTable& ct);

/// Projected ambient Levi-Civita connection against Gamma.
double cross_oracle_residual(const FrameEval& fe, const ConnectionTable& ct);

/// Lambda^d_pc against the p0-projection of [e_p, e_c] taken directly.
double lambda_bracket_residual(const FrameEval& fe, const ConnectionTable& ct);

struct ProjectorResiduals {
  double idempotence = 0.0;    // p p - p
  double complement = 0.0;     // p + q - 1
  double orthogonality = 0.0;  // G(p x, q y)
  double reproduces = 0.0;     // p e_a - e_a for e_a in V_i
  double max() const;
};

ProjectorResiduals projector_residuals(const FrameEval& fe, int level);

/// K^d_abc + K^d_bac.
double slot_antisymmetry_residual(const CurvatureBlock& k);

/// Smallest eigenvalue of each extended metric block divided by its largest.
double min_level_metric_ratio(const WagnerResult& w);

/// Frame with e'_a = f_a e_a for a < m; factors are expression texts in the
/// system's names. Complement rows are untouched.
SystemDef rescale_frame(const SystemDef& sys, const std::vector<std::string>& factors);

/// Pointwise change of frame e'_a = A(a', a) e_a'. Returns
/// max |K' - (A^-1)^d_d' A^a'_a A^b'_b A^c'_c K^d'_a'b'c'|, with c, d in V_0.
double frame_change_residual(const CurvatureBlock& k, const CurvatureBlock& k_new,
                             const Eigen::MatrixXd& A);

/// A(a', a) = W^a'(e'_a) relating two frames evaluated at the same point.
Eigen::MatrixXd frame_change(const FrameEval& from, const FrameEval& to);

}  // namespace nhcurv
