#include "nhcurv/wagner.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "nhcurv/errors.hpp"

namespace nhcurv {

std::vector<std::pair<std::size_t, std::size_t>> bivector_basis(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) out.emplace_back(a, b);
  }
  return out;
}

Eigen::MatrixXd wedge_metric(const Eigen::MatrixXd& g) {
  const auto basis = bivector_basis(static_cast<std::size_t>(g.rows()));
  const auto k = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd w(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto [a, b] = basis[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto [c, d] = basis[static_cast<std::size_t>(j)];
      const auto A = static_cast<Eigen::Index>(a), B = static_cast<Eigen::Index>(b);
      const auto C = static_cast<Eigen::Index>(c), D = static_cast<Eigen::Index>(d);
      w(i, j) = g(A, C) * g(B, D) - g(A, D) * g(B, C);
    }
  }
  return w;
}

JetMatrix lower_inverse_metric(const ConnectionTable& ct,
                               const std::vector<LevelData>& done, std::size_t size) {
  JetMatrix gi = jet_matrix(size, size);
  for (std::size_t a = 0; a < ct.m; ++a) {
    for (std::size_t b = 0; b < ct.m; ++b) gi[a][b] = ct.ginv[a][b];
  }
  for (const auto& lv : done) {
    for (std::size_t P = lv.begin; P < lv.end && P < size; ++P) {
      for (std::size_t Q = lv.begin; Q < lv.end && Q < size; ++Q) {
        gi[P][Q] = lv.gup[P - lv.begin][Q - lv.begin];
      }
    }
  }
  return gi;
}

namespace {

bool is_zero(const Jet& j) { return j.is_exact_constant() && j.value() == 0.0; }

// T(Q, a, b) = g^ac g^bd C^Q_cd for the block rows Q.
JetArray raise_pair(const JetArray& C, const JetMatrix& gi, std::size_t begin,
                    std::size_t end) {
  const std::size_t k = gi.size();
  JetArray half({end - begin, k, k});  // g^bd C^Q_cd -> (Q, c, b)
  for (std::size_t Q = begin; Q < end; ++Q) {
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t b = 0; b < k; ++b) {
        Jet s;
        for (std::size_t d = 0; d < k; ++d) {
          if (!is_zero(gi[b][d]) && !is_zero(C(Q, c, d))) s += gi[b][d] * C(Q, c, d);
        }
        half(Q - begin, c, b) = s;
      }
    }
  }
  JetArray T({end - begin, k, k});
  for (std::size_t Q = 0; Q < end - begin; ++Q) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        Jet s;
        for (std::size_t c = 0; c < k; ++c) {
          if (!is_zero(gi[a][c])) s += gi[a][c] * half(Q, c, b);
        }
        T(Q, a, b) = s;
      }
    }
  }
  return T;
}

}  // namespace

JetMatrix extend_metric_level(const JetArray& C, const JetMatrix& ginv_lower,
                              std::size_t begin, std::size_t end) {
  const std::size_t k = ginv_lower.size();
  const JetArray T = raise_pair(C, ginv_lower, begin, end);
  const std::size_t r = end - begin;
  JetMatrix gup = jet_matrix(r, r);
  for (std::size_t P = 0; P < r; ++P) {
    for (std::size_t Q = 0; Q <= P; ++Q) {
      Jet s;
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          if (!is_zero(C(begin + P, a, b))) s += C(begin + P, a, b) * T(Q, a, b);
        }
      }
      gup[P][Q] = gup[Q][P] = s;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(values(gup));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("extended level metric is not positive definite");
  }
  return gup;
}

JetArray mu_components(const JetArray& C, const JetMatrix& ginv_lower,
                       const JetMatrix& glow, std::size_t begin, std::size_t end) {
  const std::size_t k = ginv_lower.size();
  const JetArray T = raise_pair(C, ginv_lower, begin, end);
  const std::size_t r = end - begin;
  JetArray mstar({r, k, k});
  for (std::size_t P = 0; P < r; ++P) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        Jet s;
        for (std::size_t Q = 0; Q < r; ++Q) s += glow[P][Q] * T(Q, a, b);
        mstar(P, a, b) = s;
      }
    }
  }
  return mstar;
}

JetArray pi_level(const JetArray& prev_pi, const JetArray& prev_curvature,
                  const JetArray& mstar, const JetArray& C, std::size_t m,
                  std::size_t begin, std::size_t end) {
  if (prev_pi.extent(1) != begin || prev_curvature.extent(1) != begin) {
    throw NumericalError("level bookkeeping mismatch in pi_level");
  }
  JetArray pi({m, end, m});
  for (std::size_t d = 0; d < m; ++d) {
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t a = 0; a < begin; ++a) pi(d, a, c) = prev_pi(d, a, c);
      for (std::size_t a = begin; a < end; ++a) {
        Jet s = C(d, a, c);
        for (std::size_t x = 0; x < begin; ++x) {
          for (std::size_t y = 0; y < begin; ++y) {
            if (x == y) continue;
            s += mstar(a - begin, x, y) * prev_curvature(d, x, y, c);
          }
        }
        pi(d, a, c) = s;
      }
    }
  }
  return pi;
}

CurvatureBlock WagnerResult::level_block(int i) const {
  if (i == 0) return schouten_block;
  const auto& lv = levels.at(static_cast<std::size_t>(i - 1));
  CurvatureBlock kb;
  kb.name = i == degree ? "wagner" : "level " + std::to_string(i);
  kb.level = i;
  kb.slots = lv.end;
  kb.m = connection.m;
  kb.components = values(lv.curvature);
  return kb;
}

WagnerResult wagner_tensor(const SystemDef& sys, const Point& q, std::optional<int> order) {
  WagnerResult r;
  r.degree = sys.degree();
  const int D = order.value_or(r.degree + 2);
  if (D < r.degree + 2) {
    throw NumericalError("jet order " + std::to_string(D) + " too low; need at least " +
                         std::to_string(r.degree + 2));
  }
  r.frame = evaluate_frame(sys, q, D);
  r.connection = nonholonomic_connection(r.frame);
  r.schouten = schouten_jets(r.frame, r.connection);
  r.schouten_block.name = "schouten";
  r.schouten_block.slots = r.connection.m;
  r.schouten_block.m = r.connection.m;
  r.schouten_block.components = values(r.schouten);

  const std::size_t m = r.connection.m;
  JetArray pi = r.connection.gamma;
  JetArray K = r.schouten;
  for (int i = 1; i <= r.degree; ++i) {
    LevelData lv;
    lv.level = i;
    lv.begin = sys.levels[static_cast<std::size_t>(i - 1)];
    lv.end = sys.levels[static_cast<std::size_t>(i)];
    const JetMatrix gi = lower_inverse_metric(r.connection, r.levels, lv.begin);
    lv.gup = extend_metric_level(r.connection.C, gi, lv.begin, lv.end);
    lv.glow = inverse(lv.gup);
    lv.mstar = mu_components(r.connection.C, gi, lv.glow, lv.begin, lv.end);
    lv.pi = pi_level(pi, K, lv.mstar, r.connection.C, m, lv.begin, lv.end);
    lv.curvature = level_curvature_jets(r.frame, r.connection.C, lv.pi, lv.end);
    pi = lv.pi;
    K = lv.curvature;
    r.levels.push_back(std::move(lv));
  }
  r.wagner = r.level_block(r.degree);
  r.wagner.name = "wagner";
  return r;
}

bool FlatnessReport::all_non_flat() const {
  for (const auto& e : entries) {
    if (e.flat) return false;
  }
  return !entries.empty();
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = count;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (i < failed_at) {
            failed_at = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

FlatnessReport flatness_scan(const SystemDef& sys, const std::string& param,
                             const std::vector<double>& values, int points_per_value,
                             std::uint64_t seed, double flat_tol, unsigned threads) {
  if (values.empty()) throw UsageError("empty parameter range");
  if (points_per_value <= 0) throw UsageError("need at least one sample point per value");
  if (!sys.param_index(param)) {
    throw UsageError("system '" + sys.id + "' has no parameter '" + param + "'");
  }
  FlatnessReport rep;
  rep.param = param;
  rep.flat_tol = flat_tol;
  std::vector<SystemDef> variants;
  std::mt19937_64 rng(seed);
  for (double v : values) {
    FlatnessEntry e;
    e.value = v;
    variants.push_back(sys.with_param(param, v));
    for (int k = 0; k < points_per_value; ++k) e.points.push_back(sample_point(variants.back(), rng));
    rep.entries.push_back(std::move(e));
  }
  const std::size_t per = static_cast<std::size_t>(points_per_value);
  std::vector<double> maxima(values.size() * per, 0.0);
  parallel_for(maxima.size(), threads, [&](std::size_t idx) {
    const std::size_t v = idx / per;
    const std::size_t k = idx % per;
    maxima[idx] = wagner_tensor(variants[v], rep.entries[v].points[k]).wagner.max_abs();
  });
  for (std::size_t v = 0; v < values.size(); ++v) {
    double mx = 0.0;
    for (std::size_t k = 0; k < per; ++k) mx = std::max(mx, maxima[v * per + k]);
    rep.entries[v].max_component = mx;
    rep.entries[v].flat = mx < flat_tol;
  }
  return rep;
}

}  // namespace nhcurv
