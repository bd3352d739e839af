#include "nhcurv/geometry.hpp"

#include <cmath>
#include <sstream>

#include "nhcurv/errors.hpp"

namespace nhcurv {
namespace {

JetVector row_jets(const std::vector<expr::Expr>& row, const JetVector& coords,
                   const std::vector<double>& params, const JetSpace& space) {
  JetVector out;
  out.reserve(row.size());
  for (const auto& e : row) {
    Jet v = e.evaluate<Jet>(coords, params);
    if (v.is_exact_constant()) v = space.constant(v.value());
    out.push_back(std::move(v));
  }
  return out;
}

Jet inner(const JetMatrix& G, const JetVector& x, const JetVector& y) {
  Jet s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Jet gy;
    for (std::size_t j = 0; j < y.size(); ++j) gy += G[i][j] * y[j];
    s += x[i] * gy;
  }
  return s;
}

std::string join(const std::vector<std::size_t>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
  os << ")";
  return os.str();
}

// Appends G-orthogonalized, normalized brackets until each complement
// block reaches its declared size.
void generate_complement(JetMatrix& B, const JetMatrix& G,
                         const std::vector<std::size_t>& levels, double rank_tol) {
  const std::size_t m = levels.front();
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const std::size_t prev_begin = k == 1 ? 0 : levels[k - 2];
    const std::size_t prev_end = levels[k - 1];
    const std::size_t want = levels[k];
    double scale = 0.0;
    for (std::size_t a = 0; a < B.size(); ++a) {
      scale = std::max(scale, std::sqrt(inner(G, B[a], B[a]).value()));
    }
    for (std::size_t a = 0; a < m && B.size() < want; ++a) {
      for (std::size_t b = prev_begin; b < prev_end && B.size() < want; ++b) {
        if (a == b) continue;
        JetVector v = lie_bracket(B[a], B[b]);
        // Remove the component along span(B) with the Gram inverse.
        const std::size_t r = B.size();
        JetMatrix gram = jet_matrix(r, r);
        JetVector rhs(r);
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 0; j <= i; ++j) gram[i][j] = gram[j][i] = inner(G, B[i], B[j]);
          rhs[i] = inner(G, B[i], v);
        }
        const JetMatrix gi = inverse(gram);
        for (std::size_t i = 0; i < r; ++i) {
          Jet c;
          for (std::size_t j = 0; j < r; ++j) c += gi[i][j] * rhs[j];
          for (std::size_t l = 0; l < v.size(); ++l) v[l] -= c * B[i][l];
        }
        const Jet norm2 = inner(G, v, v);
        if (norm2.value() <= std::pow(rank_tol * std::max(scale, 1.0), 2)) continue;
        const Jet inv_norm = recip(sqrt(norm2));
        for (auto& x : v) x *= inv_norm;
        B.push_back(std::move(v));
      }
    }
    if (B.size() < want) {
      throw ValidationError("brackets do not generate level " + std::to_string(k) +
                            " of the declared flag");
    }
  }
}

}  // namespace

std::size_t numerical_rank(const Eigen::MatrixXd& m, double rank_tol) {
  if (m.rows() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > rank_tol * s(0)) ++r;
  }
  return r;
}

Jet apply_field(const JetVector& X, const Jet& f) {
  if (f.is_exact_constant()) return Jet();
  Jet s;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].is_exact_constant() && X[i].value() == 0.0) continue;
    s += X[i] * f.derivative(i);
  }
  return s;
}

Jet frame_derivative(const FrameEval& fe, std::size_t a, const Jet& f) {
  if (f.order() < 1) throw NumericalError("insufficient jet order for frame derivative");
  return apply_field(fe.B.at(a), f);
}

JetVector lie_bracket(const JetVector& X, const JetVector& Y) {
  if (X.size() != Y.size()) throw NumericalError("vector fields of different dimension");
  for (const auto* F : {&X, &Y}) {
    for (const auto& c : *F) {
      if (!c.is_exact_constant() && c.order() < 1) {
        throw NumericalError("insufficient jet order for Lie bracket");
      }
    }
  }
  JetVector out(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) out[i] = apply_field(X, Y[i]) - apply_field(Y, X[i]);
  return out;
}

FrameEval evaluate_frame(const SystemDef& sys, const Point& q, int order,
                         const FrameOptions& opt) {
  validate_shape(sys);
  check_regular(sys, q);
  const std::size_t n = sys.dim();

  FrameEval fe;
  fe.point = q;
  fe.params = sys.param_values();
  fe.levels = sys.levels;
  // Each generated level costs one bracket.
  const int extra = sys.auto_frame() ? sys.degree() : 0;
  const JetSpace space(q, order + extra);
  JetVector coords;
  for (std::size_t i = 0; i < n; ++i) coords.push_back(space.variable(i));

  fe.G = jet_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) fe.G[i] = row_jets(sys.metric[i], coords, fe.params, space);
  for (const auto& row : sys.frame) fe.B.push_back(row_jets(row, coords, fe.params, space));

  const Eigen::MatrixXd Gv = values(fe.G);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Gv);
  if (eig.eigenvalues()(0) <= 1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff())) {
    throw ValidationError("ambient metric is not positive definite at the point");
  }

  if (sys.auto_frame()) {
    if (numerical_rank(values(fe.B), opt.rank_tol) < fe.B.size()) {
      throw ValidationError("frame rows of V are linearly dependent at the point");
    }
    generate_complement(fe.B, fe.G, sys.levels, opt.rank_tol);
    for (auto& row : fe.B) {
      for (auto& x : row) x = x.truncated(order);
    }
    for (auto& row : fe.G) {
      for (auto& x : row) x = x.truncated(order);
    }
  }
  fe.order = order;

  const Eigen::MatrixXd Bv = values(fe.B);
  if (inverse_condition(Bv) <= opt.rank_tol) {
    throw ValidationError("frame is rank deficient at the point");
  }

  // Block orthogonality: each complement block is G-orthogonal to V_{i-1}.
  const Eigen::MatrixXd gram = Bv * Gv * Bv.transpose();
  for (std::size_t k = 1; k < fe.levels.size(); ++k) {
    for (std::size_t a = 0; a < fe.levels[k - 1]; ++a) {
      for (std::size_t p = fe.levels[k - 1]; p < fe.levels[k]; ++p) {
        const double s = std::sqrt(gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) *
                                   gram(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)));
        if (std::abs(gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(p))) >
            opt.orthogonality_tol * s) {
          std::ostringstream os;
          os << "frame is not orthogonally adapted: G(e" << a + 1 << ",e" << p + 1
             << ") = " << gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(p));
          throw ValidationError(os.str());
        }
      }
    }
  }

  fe.coframe = transpose(inverse(fe.B));
  return fe;
}

JetMatrix induced_metric(const FrameEval& fe, int level) {
  const std::size_t k = fe.levels.at(static_cast<std::size_t>(level));
  JetMatrix g = jet_matrix(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b <= a; ++b) g[a][b] = g[b][a] = inner(fe.G, fe.B[a], fe.B[b]);
  }
  const Eigen::MatrixXd gv = values(g);
  Eigen::LLT<Eigen::MatrixXd> llt(gv);
  if (llt.info() != Eigen::Success) {
    throw ValidationError("induced metric is not positive definite");
  }
  return g;
}

ProjectorPair orthogonal_projectors(const FrameEval& fe, int level) {
  const auto n = static_cast<Eigen::Index>(fe.dim());
  const auto k = static_cast<Eigen::Index>(fe.levels.at(static_cast<std::size_t>(level)));
  const Eigen::MatrixXd B = values(fe.B);
  const Eigen::MatrixXd G = values(fe.G);
  const Eigen::MatrixXd Bv = B.topRows(k);
  const Eigen::MatrixXd Bc = B.bottomRows(n - k);

  auto block = [&](const Eigen::MatrixXd& rows) -> Eigen::MatrixXd {
    if (rows.rows() == 0) return Eigen::MatrixXd::Zero(n, 0);
    const Eigen::MatrixXd gram = rows * G * rows.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible()) throw NumericalError("singular Gram matrix in projector");
    // cols(i, a) = sum_b (gram^-1)_{ab} G(e_b, d_i)
    return (lu.inverse() * rows * G).transpose();
  };

  ProjectorPair pp;
  pp.level = level;
  pp.p_cols = block(Bv);
  pp.q_cols = block(Bc);
  pp.p = Bv.transpose() * pp.p_cols.transpose();
  pp.q = Eigen::MatrixXd::Identity(n, n) - pp.p;
  return pp;
}

FlagReport flag_at_point(const SystemDef& sys, const Point& q, double rank_tol) {
  validate_shape(sys);
  check_regular(sys, q);
  const std::size_t n = sys.dim();
  const std::size_t m = sys.rank();
  const auto params = sys.param_values();
  const int order = static_cast<int>(n);
  const JetSpace space(q, order);
  JetVector coords;
  for (std::size_t i = 0; i < n; ++i) coords.push_back(space.variable(i));

  JetMatrix generators;
  for (std::size_t a = 0; a < m; ++a) generators.push_back(row_jets(sys.frame[a], coords, params, space));

  auto rank_of = [&](const JetMatrix& rows) {
    return numerical_rank(values(rows), rank_tol);
  };

  FlagReport rep;
  rep.weakest_direction = 1.0;
  JetMatrix basis = generators;
  if (rank_of(basis) != m) {
    throw ValidationError("generators of V are linearly dependent at the point");
  }
  rep.dims.push_back(m);
  JetMatrix frontier = basis;
  for (std::size_t step = 0; basis.size() < n && step < n; ++step) {
    JetMatrix added;
    for (const auto& g : generators) {
      for (const auto& f : frontier) {
        JetVector v = lie_bracket(g, f);
        JetMatrix trial = basis;
        trial.push_back(v);
        if (rank_of(trial) > basis.size()) {
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(values(trial));
          const auto& s = svd.singularValues();
          rep.weakest_direction = std::min(rep.weakest_direction, s(s.size() - 1) / s(0));
          basis.push_back(v);
          added.push_back(std::move(v));
        }
      }
    }
    if (added.empty()) {
      throw ValidationError("distribution is not completely nonholonomic at the point (flag stops at " +
                            std::to_string(basis.size()) + ")");
    }
    rep.dims.push_back(basis.size());
    frontier = std::move(added);
  }
  rep.degree = static_cast<int>(rep.dims.size()) - 1;

  if (rep.dims != sys.levels) {
    throw ValidationError("declared levels " + join(sys.levels) +
                          " inconsistent with computed flag " + join(rep.dims));
  }
  if (!sys.auto_frame()) {
    // Declared rows 1..n_i must span the computed V_i.
    std::size_t used = 0;
    JetMatrix computed;
    for (std::size_t k = 0; k < rep.dims.size(); ++k) {
      while (used < rep.dims[k]) computed.push_back(basis[used++]);
      JetMatrix both = computed;
      for (std::size_t a = 0; a < rep.dims[k]; ++a) {
        both.push_back(row_jets(sys.frame[a], coords, params, space));
      }
      if (rank_of(both) != rep.dims[k]) {
        throw ValidationError("declared frame rows 1.." + std::to_string(rep.dims[k]) +
                              " do not span level " + std::to_string(k));
      }
    }
  }
  return rep;
}

}  // namespace nhcurv
