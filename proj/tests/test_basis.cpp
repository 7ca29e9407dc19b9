#include <doctest.h>

#include <cmath>

#include "blr/basis.hpp"
#include "blr/errors.hpp"
#include "blr/exponent.hpp"
#include "blr/rng.hpp"

using namespace blr;

namespace {

Subspace axis(int n, int i) {
  Matrix v = Matrix::Zero(n, 1);
  v(i, 0) = 1.0;
  return Subspace::from_orthonormal(v);
}

BLDatum loomis_whitney(double p1, double p2) {
  return BLDatum::from_kernels(2, {axis(2, 1), axis(2, 0)}, {p1, p2});
}

BLDatum crossed_triple() {
  return BLDatum::from_kernels(
      2, {axis(2, 1), axis(2, 0), Subspace::trivial(2)}, {0.25, 1.0, 0.5});
}

}  // namespace

TEST_CASE("first vector of the crossing pair is diagonal") {
  const BLDatum lw = loomis_whitney(1.0, 1.0);
  const BasisSelection sel = select_basis(lw, 4096, 1);

  // min(|x|, |y|) on the unit circle peaks on the diagonals at 1/sqrt(2).
  const Vector e1 = sel.vectors.col(0);
  CHECK(std::abs(std::abs(e1(0)) - std::abs(e1(1))) < 0.05);
  CHECK(sel.margin == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.01));

  REQUIRE(sel.step_dims.size() == 2);
  CHECK(sel.step_dims[0] == std::vector<int>{1, 1});
  CHECK(sel.step_dims[1] == std::vector<int>{0, 0});
}

TEST_CASE("identity map accepts any orthonormal pair") {
  const BLDatum d = BLDatum::from_kernels(2, {Subspace::trivial(2)}, {0.5});
  const BasisSelection sel = select_basis(d, 64, 9);
  CHECK(sel.step_dims == std::vector<std::vector<int>>{{1}, {1}});
  CHECK(sel.margin > 0.5);
}

TEST_CASE("the selected basis is orthonormal") {
  for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const BasisSelection sel = select_basis(crossed_triple(), 512, seed);
    const Matrix gram = sel.vectors.transpose() * sel.vectors;
    CHECK((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("factor maps start at the full map and shrink rank by one") {
  const BLDatum d = crossed_triple();
  const BasisSelection sel = select_basis(d, 2048, 4);

  for (int j = 0; j < d.factors(); ++j) {
    // Step zero is the map itself written in the selected coordinates.
    const Matrix m0 = factor_map(d, sel, j, 0);
    const Matrix direct = d.map(j) * sel.vectors;
    CHECK((m0 - direct).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(rank(m0) == d.map_rows(j));
  }

  // One selected direction consumed: rank drops to n_j - 1 (0 for the lines).
  CHECK(rank(factor_map(d, sel, 0, 1)) == 0);
  CHECK(rank(factor_map(d, sel, 1, 1)) == 0);
  CHECK(rank(factor_map(d, sel, 2, 1)) == 1);

  CHECK_THROWS_AS(factor_map(d, sel, 0, 2), invalid_input);
  CHECK_THROWS_AS(factor_map(d, sel, 3, 0), invalid_input);
}

TEST_CASE("step residuals split into zero and margin branches") {
  const BLDatum d = crossed_triple();
  const BasisSelection sel = select_basis(d, 2048, 4);
  for (int r = 0; r < d.ambient_dim(); ++r) {
    for (int j = 0; j < d.factors(); ++j) {
      const double residual = factor_map(d, sel, j, r).col(0).norm();
      const bool zero_branch = residual < 1e-10;
      const bool margin_branch = residual >= sel.margin - 1e-12;
      CHECK((zero_branch || margin_branch));
      CHECK(sel.step_dims[r][j] == (zero_branch ? 0 : 1));
    }
  }
}

TEST_CASE("measured step dimensions certify the row-count exponent") {
  const LocbdCheck triple = verify_locbd_exponent(
      crossed_triple(), select_basis(crossed_triple(), 2048, 5));
  CHECK(triple.exponent == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(triple.match);

  const BLDatum halves = loomis_whitney(0.5, 0.5);
  const LocbdCheck lw = verify_locbd_exponent(halves, select_basis(halves, 2048, 5));
  CHECK(lw.exponent == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lw.match);
}

TEST_CASE("selection demands kernels and at least one trial") {
  Matrix row(1, 2);
  row << 1, 0;
  const BLDatum general = BLDatum::from_maps(2, {row}, {0.5});
  CHECK_THROWS_AS(select_basis(general, 64, 0), invalid_input);
  CHECK_THROWS_AS(select_basis(loomis_whitney(1, 1), 0, 0), invalid_input);
}

TEST_CASE("perturbed projection data keep the certified exponent") {
  Rng rng = stream(606, "basis-perturbed");
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 1));
    const int J = 1 + static_cast<int>(rng.uniform_int(0, 2));
    std::vector<Subspace> kernels;
    std::vector<double> p;
    for (int j = 0; j < J; ++j) {
      kernels.push_back(random_subspace(n, static_cast<int>(rng.uniform_int(0, n - 1)),
                                        rng.next()));
      p.push_back(rng.uniform01());
    }
    const BLDatum base = BLDatum::from_kernels(n, kernels, p);
    const BLDatum moved = perturb(base, {1e-3, rng.next(), 1}, 0);
    const BasisSelection sel = select_basis(moved, 2048, rng.next());
    CHECK(sel.margin > 1e-3);
    CHECK(verify_locbd_exponent(moved, sel).match);
  }
}
