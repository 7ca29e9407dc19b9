#include "blr/matrix.hpp"

#include "blr/errors.hpp"

namespace blr {

bool is_finite(const Matrix& m) {
  return m.allFinite();
}

int rank(const Matrix& m, double tol) {
  if (tol <= 0.0) throw invalid_input("rank: tolerance must be positive");
  if (!is_finite(m)) throw invalid_input("rank: non-finite matrix entries");
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = tol * (top > 0.0 ? top : 1.0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++r;
  }
  return r;
}

double operator_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace blr
