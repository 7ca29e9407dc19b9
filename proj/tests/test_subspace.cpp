#include <doctest.h>

#include <cmath>
#include <limits>

#include "blr/errors.hpp"
#include "blr/matrix.hpp"
#include "blr/rng.hpp"
#include "blr/subspace.hpp"

using namespace blr;

namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Subspace line2(double x, double y) {
  Matrix v(2, 1);
  v << x, y;
  return Subspace::span_of(v);
}

// Independent closed-form eigenvalue oracle for symmetric 2x2 matrices:
// largest |lambda| of [[a,b],[b,c]].
double sym2_spectral_norm(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return std::max(std::abs(mean + disc), std::abs(mean - disc));
}

}  // namespace

TEST_CASE("rank on small matrices") {
  CHECK(rank(Matrix::Identity(2, 2)) == 2);
  CHECK(rank(Matrix::Zero(2, 2)) == 0);
  CHECK(rank(mat2(1, 1, 1, 1)) == 1);

  Matrix bad = mat2(1, 0, 0, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(rank(bad), invalid_input);
  CHECK_THROWS_AS(rank(Matrix::Identity(2, 2), 0.0), invalid_input);
}

TEST_CASE("image dimension under a coordinate projection") {
  Matrix proj_x(1, 2);
  proj_x << 1, 0;

  CHECK(image_dim(proj_x, line2(0, 1)) == 0);  // the kernel
  CHECK(image_dim(proj_x, Subspace::full(2)) == 1);
  CHECK(image_dim(proj_x, line2(1, 1)) == 1);

  CHECK_THROWS_AS(image_dim(proj_x, Subspace::full(3)), invalid_input);
}

TEST_CASE("sum and intersection of coordinate axes") {
  const Subspace x = line2(1, 0);
  const Subspace y = line2(0, 1);

  CHECK(sum(x, y).dim() == 2);
  CHECK(intersect(x, y).dim() == 0);
  const Subspace xx = intersect(x, x);
  CHECK(xx.dim() == 1);
  CHECK(x.contains(xx));

  CHECK_THROWS_AS(sum(x, Subspace::full(3)), invalid_input);
}

TEST_CASE("orthocomplement inside a host subspace") {
  const Subspace x = line2(1, 0);
  const Subspace full = Subspace::full(2);

  CHECK(orthocomplement(Subspace::trivial(2), full).dim() == 2);
  CHECK(orthocomplement(full, full).dim() == 0);

  const Subspace comp = orthocomplement(x, full);
  CHECK(comp.dim() == 1);
  CHECK(std::abs(comp.basis()(0, 0)) < 1e-12);
  CHECK(std::abs(std::abs(comp.basis()(1, 0)) - 1.0) < 1e-12);

  // x-axis is not inside the diagonal line
  CHECK_THROWS_AS(orthocomplement(x, line2(1, 1)), invalid_input);
}

TEST_CASE("projection matrices of lines and the plane") {
  CHECK((line2(1, 0).projection() - mat2(1, 0, 0, 0)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((Subspace::full(2).projection() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((line2(1, 1).projection() - mat2(0.5, 0.5, 0.5, 0.5)).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("grassmann distance on lines") {
  const Subspace x = line2(1, 0);
  const Subspace y = line2(0, 1);
  const Subspace diag = line2(std::cos(M_PI / 4), std::sin(M_PI / 4));

  CHECK(grassmann_distance(x, x) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(grassmann_distance(x, y) == doctest::Approx(1.0).epsilon(1e-12));

  // Frozen value confirmed by the closed-form symmetric eigen oracle.
  const Matrix diff = x.projection() - diag.projection();
  const double oracle = sym2_spectral_norm(diff(0, 0), diff(0, 1), diff(1, 1));
  CHECK(oracle == doctest::Approx(0.70710678118654746).epsilon(1e-12));
  CHECK(grassmann_distance(x, diag) == doctest::Approx(0.70710678).epsilon(1e-8));

  CHECK_THROWS_AS(grassmann_distance(x, Subspace::full(2)), invalid_input);
}

TEST_CASE("random subspaces are deterministic per seed") {
  CHECK(random_subspace(3, 0, 17).dim() == 0);
  CHECK(random_subspace(3, 3, 17).dim() == 3);

  const Subspace a = random_subspace(2, 1, 7);
  const Subspace b = random_subspace(2, 1, 7);
  CHECK(a.basis() == b.basis());  // bit-for-bit

  const Subspace c = random_subspace(2, 1, 8);
  CHECK((a.basis() - c.basis()).cwiseAbs().maxCoeff() > 1e-6);

  CHECK_THROWS_AS(random_subspace(2, 3, 0), invalid_input);
}

TEST_CASE("projection matrices are symmetric idempotents") {
  Rng rng = stream(101, "test-proj");
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
    const int k = static_cast<int>(rng.uniform_int(0, n));
    const Subspace v = random_subspace(n, k, rng.next());
    const Matrix p = v.projection();
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((p - p.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("grassmann distance satisfies the metric axioms on samples") {
  Rng rng = stream(55, "test-metric");
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
    const int k = 1 + static_cast<int>(rng.uniform_int(0, n - 1));
    const Subspace a = random_subspace(n, k, rng.next());
    const Subspace b = random_subspace(n, k, rng.next());
    const Subspace c = random_subspace(n, k, rng.next());

    const double ab = grassmann_distance(a, b);
    const double ba = grassmann_distance(b, a);
    const double ac = grassmann_distance(a, c);
    const double cb = grassmann_distance(c, b);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(ab <= ac + cb + 1e-8);
  }
}

TEST_CASE("dimension is modular over sum and intersection") {
  Rng rng = stream(77, "test-modular");
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 3));
    const Subspace v = random_subspace(n, static_cast<int>(rng.uniform_int(0, n)), rng.next());
    const Subspace w = random_subspace(n, static_cast<int>(rng.uniform_int(0, n)), rng.next());
    CHECK(sum(v, w).dim() + intersect(v, w).dim() == v.dim() + w.dim());
  }
}

TEST_CASE("sum and intersection nest as expected") {
  Rng rng = stream(78, "test-nesting");
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
    const Subspace v = random_subspace(n, static_cast<int>(rng.uniform_int(0, n)), rng.next());
    const Subspace w = random_subspace(n, static_cast<int>(rng.uniform_int(0, n)), rng.next());
    const Subspace joined = sum(v, w);
    CHECK(joined.contains(v));
    CHECK(joined.contains(w));
    const Subspace met = intersect(v, w);
    CHECK(v.contains(met));
    CHECK(w.contains(met));

    // A shared direction survives the intersection.
    if (v.dim() > 0 && v.dim() < n) {
      const Subspace bigger = sum(v, random_subspace(n, 1, rng.next()));
      CHECK(intersect(v, bigger).dim() == v.dim());
    }
  }
}

TEST_CASE("image dimension is bounded by rank and subspace dimension") {
  Rng rng = stream(99, "test-image-bound");
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
    const int rows = 1 + static_cast<int>(rng.uniform_int(0, n - 1));
    Matrix m(rows, n);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < n; ++c) m(r, c) = rng.normal();
    }
    const Subspace v = random_subspace(n, static_cast<int>(rng.uniform_int(0, n)), rng.next());
    CHECK(image_dim(m, v) <= std::min(rank(m), v.dim()));
  }
}
