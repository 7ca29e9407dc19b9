#include "blr/subspace.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

#include "blr/errors.hpp"
#include "blr/rng.hpp"

namespace blr {

namespace {

void check_ambient(const Subspace& v, const Subspace& w, const char* op) {
  if (v.ambient_dim() != w.ambient_dim()) {
    throw invalid_input(std::string(op) + ": ambient dimension mismatch");
  }
}

}  // namespace

Subspace Subspace::trivial(int ambient_dim) {
  if (ambient_dim < 0) throw invalid_input("subspace: negative ambient dimension");
  return Subspace(Matrix(ambient_dim, 0));
}

Subspace Subspace::full(int ambient_dim) {
  if (ambient_dim < 0) throw invalid_input("subspace: negative ambient dimension");
  return Subspace(Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::from_orthonormal(Matrix basis) {
  if (!is_finite(basis)) throw invalid_input("subspace: non-finite basis");
  if (basis.cols() > basis.rows()) {
    throw invalid_input("subspace: more basis vectors than ambient dimension");
  }
  if (basis.cols() > 0) {
    const Matrix gram = basis.transpose() * basis;
    const double err =
        (gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
    if (err > 1e-10) throw invalid_input("subspace: basis is not orthonormal");
  }
  return Subspace(std::move(basis));
}

Subspace Subspace::span_of(const Matrix& vectors, double tol) {
  if (!is_finite(vectors)) throw invalid_input("subspace: non-finite spanning set");
  if (vectors.cols() == 0 || vectors.rows() == 0) {
    return Subspace(Matrix(vectors.rows(), 0));
  }
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = tol * (top > 0.0 ? top : 1.0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++r;
  }
  return Subspace(svd.matrixU().leftCols(r));
}

bool Subspace::contains(const Subspace& v, double tol) const {
  if (v.ambient_dim() != ambient_dim()) return false;
  if (v.dim() == 0) return true;
  const Matrix residual = v.basis() - basis_ * (basis_.transpose() * v.basis());
  return residual.cwiseAbs().maxCoeff() <= tol;
}

namespace {

// Image computations anchor the rank threshold on the map's own norm, so a
// direction the map annihilates up to rounding counts as zero even though
// the product's largest singular value is itself just noise.
double image_cutoff(const Matrix& map, double tol) {
  const double anchor = operator_norm(map);
  return tol * (anchor > 0.0 ? anchor : 1.0);
}

}  // namespace

int image_dim(const Matrix& map, const Subspace& v, double tol) {
  if (map.cols() != v.ambient_dim()) {
    throw invalid_input("image_dim: map and subspace dimensions disagree");
  }
  if (!is_finite(map)) throw invalid_input("image_dim: non-finite map entries");
  if (tol <= 0.0) throw invalid_input("image_dim: tolerance must be positive");
  if (v.dim() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(map * v.basis());
  const double cutoff = image_cutoff(map, tol);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > cutoff) ++r;
  }
  return r;
}

Subspace image(const Matrix& map, const Subspace& v, double tol) {
  if (map.cols() != v.ambient_dim()) {
    throw invalid_input("image: map and subspace dimensions disagree");
  }
  if (v.dim() == 0) return Subspace::trivial(static_cast<int>(map.rows()));
  Eigen::JacobiSVD<Matrix> svd(map * v.basis(), Eigen::ComputeThinU);
  const double cutoff = image_cutoff(map, tol);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > cutoff) ++r;
  }
  return Subspace::from_orthonormal(svd.matrixU().leftCols(r));
}

Subspace sum(const Subspace& v, const Subspace& w) {
  check_ambient(v, w, "sum");
  Matrix joint(v.ambient_dim(), v.dim() + w.dim());
  joint.leftCols(v.dim()) = v.basis();
  joint.rightCols(w.dim()) = w.basis();
  return Subspace::span_of(joint);
}

Subspace complement(const Subspace& v) {
  const int n = v.ambient_dim();
  const int k = v.dim();
  if (k == 0) return Subspace::full(n);
  if (k == n) return Subspace::trivial(n);
  Eigen::JacobiSVD<Matrix> svd(v.basis(), Eigen::ComputeFullU);
  return Subspace::from_orthonormal(svd.matrixU().rightCols(n - k));
}

Subspace intersect(const Subspace& v, const Subspace& w) {
  check_ambient(v, w, "intersect");
  return complement(sum(complement(v), complement(w)));
}

Subspace orthocomplement(const Subspace& v, const Subspace& h) {
  check_ambient(v, h, "orthocomplement");
  if (!h.contains(v, 1e-8)) {
    throw invalid_input("orthocomplement: subspace is not contained in the host");
  }
  if (v.dim() == 0) return h;
  // Coordinates of V inside H, complemented there, then mapped back.
  const Matrix coords = h.basis().transpose() * v.basis();
  const Subspace inner = complement(Subspace::span_of(coords));
  return Subspace::from_orthonormal(h.basis() * inner.basis());
}

double projection_distance(const Subspace& v, const Subspace& w) {
  check_ambient(v, w, "projection_distance");
  return operator_norm(v.projection() - w.projection());
}

double grassmann_distance(const Subspace& v, const Subspace& w) {
  check_ambient(v, w, "grassmann_distance");
  if (v.dim() != w.dim()) {
    throw invalid_input("grassmann_distance: subspaces have unequal dimension");
  }
  return std::clamp(projection_distance(v, w), 0.0, 1.0);
}

Subspace random_subspace(int n, int k, Rng& rng) {
  if (n < 0 || k < 0 || k > n) {
    throw invalid_input("random_subspace: need 0 <= k <= n");
  }
  if (k == 0) return Subspace::trivial(n);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix draw(n, k);
    for (int c = 0; c < k; ++c) {
      for (int r = 0; r < n; ++r) draw(r, c) = rng.normal();
    }
    Subspace s = Subspace::span_of(draw);
    if (s.dim() == k) return s;
  }
  throw invalid_input("random_subspace: failed to draw a full-rank sample");
}

Subspace random_subspace(int n, int k, std::uint64_t seed) {
  Rng rng = stream(seed, "subspace");
  return random_subspace(n, k, rng);
}

Subspace perturbed_subspace(const Subspace& v, double target, Rng& rng) {
  if (target < 0.0) throw invalid_input("perturbed_subspace: negative radius");
  const int n = v.ambient_dim();
  if (target == 0.0 || v.dim() == 0 || v.dim() == n) return v;

  Matrix g(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) g(r, c) = rng.normal();
  }
  Matrix skew = g - g.transpose();
  const double norm = operator_norm(skew);
  if (norm < 1e-14) return v;
  skew /= norm;

  const auto rotated = [&](double theta) {
    const Matrix rot = (theta * skew).exp();
    return Subspace::from_orthonormal(rot * v.basis());
  };
  const auto dist = [&](double theta) {
    return projection_distance(v, rotated(theta));
  };

  // Grow until the target is reachable, then bisect onto it.
  double hi = std::min(target * 2.0 + 1e-3, 3.2);
  while (dist(hi) < target && hi < 3.2) hi = std::min(hi * 2.0, 3.2);
  if (dist(hi) < target) {
    // Radius saturates below the target; the largest probe still satisfies
    // the <= target contract.
    return rotated(hi);
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double d = dist(mid);
    if (d < target) {
      lo = mid;
      if (target - d < 1e-9) break;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14) break;
  }
  // lo is the last probe measured strictly inside the radius.
  return rotated(lo);
}

}  // namespace blr
