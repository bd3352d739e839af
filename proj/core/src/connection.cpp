#include "nhcurv/connection.hpp"

#include <algorithm>
#include <cmath>

#include "nhcurv/errors.hpp"

namespace nhcurv {
namespace {

bool is_zero(const Jet& j) { return j.is_exact_constant() && j.value() == 0.0; }

}  // namespace

RealArray values(const JetArray& a) {
  return a.map([](const Jet& j) { return j.value(); });
}

double CurvatureBlock::max_abs() const {
  double r = 0.0;
  for (double v : components.data()) r = std::max(r, std::abs(v));
  return r;
}

JetArray structure_functions(const FrameEval& fe) {
  const std::size_t n = fe.dim();
  JetArray C({n, n, n});
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const JetVector br = lie_bracket(fe.B[a], fe.B[b]);
      for (std::size_t c = 0; c < n; ++c) {
        Jet s;
        for (std::size_t i = 0; i < n; ++i) {
          if (!is_zero(br[i])) s += fe.coframe[c][i] * br[i];
        }
        C(c, a, b) = s;
        C(c, b, a) = -s;
      }
    }
  }
  return C;
}

ConnectionTable nonholonomic_connection(const FrameEval& fe) {
  ConnectionTable ct;
  ct.m = fe.rank();
  ct.n = fe.dim();
  const std::size_t m = ct.m;
  const std::size_t n = ct.n;
  ct.C = structure_functions(fe);
  ct.g = induced_metric(fe, 0);
  ct.ginv = inverse(ct.g);

  // e_a(g_bc), one order lower.
  JetArray dg({m, m, m});
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t c = 0; c <= b; ++c) {
        dg(a, b, c) = dg(a, c, b) = frame_derivative(fe, a, ct.g[b][c]);
      }
    }
  }

  ct.braces = JetArray({m, m, m});
  ct.omega = JetArray({m, m, m});
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        Jet s;
        for (std::size_t e = 0; e < m; ++e) {
          s += ct.ginv[c][e] * (dg(a, b, e) + dg(b, a, e) - dg(e, a, b));
        }
        ct.braces(c, a, b) = 0.5 * s;
        ct.omega(c, a, b) = -0.5 * ct.C(c, a, b);
      }
    }
  }

  // g^{cd} Omega^e_bd, reused twice.
  JetArray raised({m, m, m});  // raised(e, b, c) = g^{cd} Omega^e_bd
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t c = 0; c < m; ++c) {
        Jet s;
        for (std::size_t d = 0; d < m; ++d) s += ct.ginv[c][d] * ct.omega(e, b, d);
        raised(e, b, c) = s;
      }
    }
  }
  ct.gamma = JetArray({m, m, m});
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        Jet s = ct.braces(c, a, b) - ct.omega(c, a, b);
        for (std::size_t e = 0; e < m; ++e) {
          s += ct.g[a][e] * raised(e, b, c) + ct.g[b][e] * raised(e, a, c);
        }
        ct.gamma(c, a, b) = s;
      }
    }
  }

  ct.lambda = JetArray({m, n, m});
  ct.M = JetArray({n, m, m});
  for (std::size_t p = m; p < n; ++p) {
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t d = 0; d < m; ++d) ct.lambda(d, p, c) = ct.C(d, p, c);
    }
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) ct.M(p, a, b) = ct.C(p, a, b);
    }
  }
  return ct;
}

JetArray level_curvature_jets(const FrameEval& fe, const JetArray& C,
                              const JetArray& pi, std::size_t slots) {
  const std::size_t m = fe.rank();
  const std::size_t n = fe.dim();
  if (pi.extent(1) < slots) throw NumericalError("connection table too small for level");
  for (const auto& x : pi.data()) {
    if (!x.is_exact_constant() && x.order() < 1) {
      throw NumericalError("insufficient jet order for curvature");
    }
  }

  // e_a(Pi^d_bc) for every a < slots.
  JetArray dpi({slots, m, slots, m});  // (a, d, b, c)
  for (std::size_t a = 0; a < slots; ++a) {
    for (std::size_t d = 0; d < m; ++d) {
      for (std::size_t b = 0; b < slots; ++b) {
        for (std::size_t c = 0; c < m; ++c) {
          if (a != b) dpi(a, d, b, c) = apply_field(fe.B[a], pi(d, b, c));
        }
      }
    }
  }

  JetArray K({m, slots, slots, m});
  for (std::size_t a = 0; a < slots; ++a) {
    for (std::size_t b = a + 1; b < slots; ++b) {
      for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t d = 0; d < m; ++d) {
          Jet s = dpi(a, d, b, c) - dpi(b, d, a, c);
          for (std::size_t e = 0; e < m; ++e) {
            s += pi(d, a, e) * pi(e, b, c) - pi(d, b, e) * pi(e, a, c);
          }
          for (std::size_t f = 0; f < slots; ++f) {
            if (!is_zero(C(f, a, b))) s -= C(f, a, b) * pi(d, f, c);
          }
          for (std::size_t p = slots; p < n; ++p) {
            if (!is_zero(C(p, a, b))) s -= C(p, a, b) * C(d, p, c);
          }
          K(d, a, b, c) = s;
          K(d, b, a, c) = -s;
        }
      }
    }
  }
  return K;
}

JetArray schouten_jets(const FrameEval& fe, const ConnectionTable& ct) {
  return level_curvature_jets(fe, ct.C, ct.gamma, ct.m);
}

CurvatureBlock schouten_tensor(const FrameEval& fe, const ConnectionTable& ct) {
  CurvatureBlock kb;
  kb.name = "schouten";
  kb.level = 0;
  kb.slots = ct.m;
  kb.m = ct.m;
  kb.components = values(schouten_jets(fe, ct));
  return kb;
}

RealArray ambient_christoffel(const FrameEval& fe) {
  const std::size_t n = fe.dim();
  const Eigen::MatrixXd G = values(fe.G);
  const Eigen::MatrixXd Ginv = G.inverse();
  // dG(k, i, j) = d_k G_ij
  RealArray dG({n, n, n});
  std::vector<int> alpha(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    alpha.assign(n, 0);
    alpha[k] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) dG(k, i, j) = fe.G[i][j].partial(alpha);
    }
  }
  RealArray chr({n, n, n});
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
          s += Ginv(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) *
               (dG(i, l, j) + dG(j, l, i) - dG(l, i, j));
        }
        chr(k, i, j) = 0.5 * s;
      }
    }
  }
  return chr;
}

RealArray projected_connection_from_ambient(const FrameEval& fe) {
  const std::size_t n = fe.dim();
  const std::size_t m = fe.rank();
  const RealArray chr = ambient_christoffel(fe);
  const ProjectorPair pp = orthogonal_projectors(fe, 0);
  const Eigen::MatrixXd B = values(fe.B);
  RealArray out({m, m, m});
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      // Coordinate components of nabla_{e_a} e_b.
      Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      for (std::size_t k = 0; k < n; ++k) {
        double s = apply_field(fe.B[a], fe.B[b][k]).value();
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            s += chr(k, i, j) * B(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i)) *
                 B(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j));
          }
        }
        v(static_cast<Eigen::Index>(k)) = s;
      }
      const Eigen::VectorXd coeffs = pp.p_cols.transpose() * v;
      for (std::size_t c = 0; c < m; ++c) out(c, a, b) = coeffs(static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

}  // namespace nhcurv
