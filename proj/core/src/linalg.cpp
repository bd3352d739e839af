#include "nhcurv/linalg.hpp"

#include <cmath>

#include "nhcurv/errors.hpp"

namespace nhcurv {

JetMatrix jet_matrix(std::size_t rows, std::size_t cols) {
  return JetMatrix(rows, JetVector(cols));
}

Eigen::MatrixXd values(const JetMatrix& m) {
  const auto rows = static_cast<Eigen::Index>(m.size());
  const auto cols = static_cast<Eigen::Index>(m.empty() ? 0 : m[0].size());
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value();
    }
  }
  return out;
}

Eigen::VectorXd values(const JetVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].value();
  return out;
}

JetMatrix inverse(const JetMatrix& a) {
  const std::size_t n = a.size();
  JetMatrix m = a;
  JetMatrix inv = jet_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = Jet(1.0);

  double scale = 0.0;
  for (const auto& row : a) {
    for (const auto& x : row) scale = std::max(scale, std::abs(x.value()));
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r][col].value()) > std::abs(m[pivot][col].value())) pivot = r;
    }
    if (std::abs(m[pivot][col].value()) <= 1e-14 * scale) {
      throw NumericalError("singular matrix in jet inverse");
    }
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    const Jet r = recip(m[col][col]);
    for (auto& x : m[col]) x *= r;
    for (auto& x : inv[col]) x *= r;
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col) continue;
      const Jet f = m[row][col];
      if (f.is_exact_constant() && f.value() == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        m[row][k] -= f * m[col][k];
        inv[row][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

JetMatrix transpose(const JetMatrix& a) {
  if (a.empty()) return {};
  JetMatrix t = jet_matrix(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

JetMatrix multiply(const JetMatrix& a, const JetMatrix& b) {
  const std::size_t inner = b.size();
  JetMatrix out = jet_matrix(a.size(), b.empty() ? 0 : b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < out[i].size(); ++j) {
      Jet s;
      for (std::size_t k = 0; k < inner; ++k) s += a[i][k] * b[k][j];
      out[i][j] = s;
    }
  }
  return out;
}

double inverse_condition(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

}  // namespace nhcurv
