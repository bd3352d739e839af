#include "nhcurv/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "nhcurv/errors.hpp"

namespace nhcurv {

double ProjectorResiduals::max() const {
  return std::max({idempotence, complement, orthogonality, reproduces});
}

double torsion_residual(const ConnectionTable& ct) {
  const std::size_t m = ct.m;
  double worst = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        const double r = ct.gamma(c, a, b).value() - ct.gamma(c, b, a).value() +
                         2.0 * ct.omega(c, a, b).value();
        worst = std::max(worst, std::abs(r));
      }
    }
  }
  return worst;
}

double metric_compatibility_residual(const FrameEval& fe, const ConnectionTable& ct) {
  const std::size_t m = ct.m;
  double worst = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        double r = frame_derivative(fe, c, ct.g[a][b]).value();
        for (std::size_t e = 0; e < m; ++e) {
          r -= ct.gamma(e, c, a).value() * ct.g[e][b].value() +
               ct.gamma(e, c, b).value() * ct.g[a][e].value();
        }
        worst = std::max(worst, std::abs(r));
      }
    }
  }
  return worst;
}

double cross_oracle_residual(const FrameEval& fe, const ConnectionTable& ct) {
  const RealArray amb = projected_connection_from_ambient(fe);
  const RealArray gam = values(ct.gamma);
  double worst = 0.0;
  for (std::size_t k = 0; k < amb.data().size(); ++k) {
    worst = std::max(worst, std::abs(amb.data()[k] - gam.data()[k]));
  }
  return worst;
}

double lambda_bracket_residual(const FrameEval& fe, const ConnectionTable& ct) {
  const ProjectorPair pp = orthogonal_projectors(fe, 0);
  const std::size_t n = ct.n;
  const std::size_t m = ct.m;
  double worst = 0.0;
  for (std::size_t p = m; p < n; ++p) {
    for (std::size_t c = 0; c < m; ++c) {
      const JetVector br = lie_bracket(fe.B[p], fe.B[c]);
      Eigen::VectorXd v(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = br[i].value();
      const Eigen::VectorXd coeffs = pp.p_cols.transpose() * v;
      for (std::size_t d = 0; d < m; ++d) {
        worst = std::max(worst, std::abs(coeffs(static_cast<Eigen::Index>(d)) -
                                         ct.lambda(d, p, c).value()));
      }
    }
  }
  return worst;
}

ProjectorResiduals projector_residuals(const FrameEval& fe, int level) {
  const ProjectorPair pp = orthogonal_projectors(fe, level);
  const Eigen::MatrixXd G = values(fe.G);
  const Eigen::MatrixXd B = values(fe.B);
  const auto n = static_cast<Eigen::Index>(fe.dim());
  const auto k = static_cast<Eigen::Index>(fe.levels.at(static_cast<std::size_t>(level)));
  ProjectorResiduals r;
  r.idempotence = (pp.p * pp.p - pp.p).cwiseAbs().maxCoeff();
  r.complement = (pp.p + pp.q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  r.orthogonality = (pp.p.transpose() * G * pp.q).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd inside = B.topRows(k).transpose();
  r.reproduces = (pp.p * inside - inside).cwiseAbs().maxCoeff();
  return r;
}

double slot_antisymmetry_residual(const CurvatureBlock& k) {
  double worst = 0.0;
  for (std::size_t d = 0; d < k.m; ++d) {
    for (std::size_t a = 0; a < k.slots; ++a) {
      for (std::size_t b = 0; b < k.slots; ++b) {
        for (std::size_t c = 0; c < k.m; ++c) {
          worst = std::max(worst, std::abs(k(d, a, b, c) + k(d, b, a, c)));
        }
      }
    }
  }
  return worst;
}

double min_level_metric_ratio(const WagnerResult& w) {
  double worst = 1.0;
  for (const auto& lv : w.levels) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(values(lv.gup));
    const auto& ev = eig.eigenvalues();
    worst = std::min(worst, ev(0) / ev(ev.size() - 1));
  }
  return worst;
}

SystemDef rescale_frame(const SystemDef& sys, const std::vector<std::string>& factors) {
  if (factors.size() != sys.rank()) {
    throw UsageError("need one scale factor per generator of V");
  }
  SystemDef out = sys;
  const expr::Symbols sym = sys.symbols();
  for (std::size_t a = 0; a < factors.size(); ++a) {
    const expr::Expr f = expr::parse(factors[a], sym);
    for (auto& entry : out.frame[a]) entry = expr::multiply(f, entry);
  }
  return out;
}

Eigen::MatrixXd frame_change(const FrameEval& from, const FrameEval& to) {
  const Eigen::MatrixXd W = values(from.coframe);
  const Eigen::MatrixXd Bnew = values(to.B);
  return W * Bnew.transpose();
}

double frame_change_residual(const CurvatureBlock& k, const CurvatureBlock& k_new,
                             const Eigen::MatrixXd& A) {
  if (k.slots != k_new.slots || k.m != k_new.m) {
    throw UsageError("curvature blocks have different shapes");
  }
  const std::size_t s = k.slots;
  const std::size_t m = k.m;
  const auto mm = static_cast<Eigen::Index>(m);
  const Eigen::MatrixXd Ainv = A.topLeftCorner(mm, mm).inverse();
  auto a_ = [&](std::size_t i, std::size_t j) {
    return A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  // Transform one index at a time: c, then the slot pair, then d.
  RealArray t1({m, s, s, m});
  for (std::size_t d = 0; d < m; ++d)
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        for (std::size_t c = 0; c < m; ++c) {
          double acc = 0.0;
          for (std::size_t c2 = 0; c2 < m; ++c2) acc += a_(c2, c) * k(d, a, b, c2);
          t1(d, a, b, c) = acc;
        }
  RealArray t2({m, s, s, m});
  for (std::size_t d = 0; d < m; ++d)
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        for (std::size_t c = 0; c < m; ++c) {
          double acc = 0.0;
          for (std::size_t b2 = 0; b2 < s; ++b2) acc += a_(b2, b) * t1(d, a, b2, c);
          t2(d, a, b, c) = acc;
        }
  RealArray t3({m, s, s, m});
  for (std::size_t d = 0; d < m; ++d)
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        for (std::size_t c = 0; c < m; ++c) {
          double acc = 0.0;
          for (std::size_t a2 = 0; a2 < s; ++a2) acc += a_(a2, a) * t2(d, a2, b, c);
          t3(d, a, b, c) = acc;
        }
  double worst = 0.0;
  for (std::size_t d = 0; d < m; ++d)
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = 0; b < s; ++b)
        for (std::size_t c = 0; c < m; ++c) {
          double acc = 0.0;
          for (std::size_t d2 = 0; d2 < m; ++d2) {
            acc += Ainv(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d2)) *
                   t3(d2, a, b, c);
          }
          worst = std::max(worst, std::abs(acc - k_new(d, a, b, c)));
        }
  return worst;
}

}  // namespace nhcurv
