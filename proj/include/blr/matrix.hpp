#pragma once

#include <Eigen/Dense>

namespace blr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Shared relative SVD threshold for every rank decision in the library.
inline constexpr double kRankTol = 1e-8;

bool is_finite(const Matrix& m);

// Number of singular values above tol times the largest singular value
// (or above tol itself when the matrix vanishes). Throws invalid_input on
// non-finite entries or tol <= 0.
int rank(const Matrix& m, double tol = kRankTol);

// Largest singular value.
double operator_norm(const Matrix& m);

}  // namespace blr
