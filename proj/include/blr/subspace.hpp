#pragma once

#include <cstdint>

#include "blr/matrix.hpp"

namespace blr {

class Rng;

// A linear subspace of R^n stored as an orthonormal basis (n x dim, possibly
// zero columns for the trivial subspace). Immutable after construction.
class Subspace {
 public:
  static Subspace trivial(int ambient_dim);
  static Subspace full(int ambient_dim);

  // Accepts a matrix whose columns are already orthonormal within 1e-10.
  static Subspace from_orthonormal(Matrix basis);

  // Orthonormalized column space of an arbitrary spanning set.
  static Subspace span_of(const Matrix& vectors, double tol = kRankTol);

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }

  // Symmetric idempotent matrix with this image.
  Matrix projection() const { return basis_ * basis_.transpose(); }

  // Projection of x onto the subspace.
  Vector project(const Vector& x) const { return basis_ * (basis_.transpose() * x); }

  // True when every basis vector of v is reproduced by projection onto this
  // subspace within tol.
  bool contains(const Subspace& v, double tol = 1e-8) const;

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}

  Matrix basis_;
};

// rank(M restricted to V) = dim of the image M(V).
int image_dim(const Matrix& map, const Subspace& v, double tol = kRankTol);

// The image M(V) as a subspace of R^rows(M).
Subspace image(const Matrix& map, const Subspace& v, double tol = kRankTol);

Subspace sum(const Subspace& v, const Subspace& w);

// Computed through complement duality: V cap W = (V^perp + W^perp)^perp.
Subspace intersect(const Subspace& v, const Subspace& w);

// Orthogonal complement within the full ambient space.
Subspace complement(const Subspace& v);

// Orthogonal complement of V inside H; requires V to be contained in H.
Subspace orthocomplement(const Subspace& v, const Subspace& h);

// Operator norm of the difference of orthogonal projections; defined for any
// pair of subspaces of the same ambient space (used for deduplication).
double projection_distance(const Subspace& v, const Subspace& w);

// The metric used everywhere a perturbation radius appears: the operator
// norm of P_V - P_W, restricted to pairs of equal dimension so the metric
// axioms apply. Values lie in [0, 1].
double grassmann_distance(const Subspace& v, const Subspace& w);

// Orthonormalized span of k independent standard-normal vectors;
// deterministic per seed.
Subspace random_subspace(int n, int k, std::uint64_t seed);

// Same sampler, driven by an existing stream (k is dim of the result).
Subspace random_subspace(int n, int k, Rng& rng);

// Rotates v by exp(theta*A) for a random unit-norm skew generator A, with
// theta tuned by bisection so the measured projection distance from v hits
// `target` (never exceeding it). target = 0 returns v unchanged.
Subspace perturbed_subspace(const Subspace& v, double target, Rng& rng);

}  // namespace blr
