#pragma once

// Dense linear algebra over jets and conversions to Eigen.

#include <Eigen/Dense>
#include <vector>

#include "nhcurv/jet.hpp"

namespace nhcurv {

using JetMatrix = std::vector<std::vector<Jet>>;
using JetVector = std::vector<Jet>;

JetMatrix jet_matrix(std::size_t rows, std::size_t cols);
Eigen::MatrixXd values(const JetMatrix& m);
Eigen::VectorXd values(const JetVector& v);

/// Gauss-Jordan with partial pivoting on the value part.
JetMatrix inverse(const JetMatrix& a);
JetMatrix transpose(const JetMatrix& a);
JetMatrix multiply(const JetMatrix& a, const JetMatrix& b);

/// Smallest over largest singular value.
double inverse_condition(const Eigen::MatrixXd& a);

}  // namespace nhcurv
