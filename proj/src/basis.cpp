#include "blr/basis.hpp"

#include <cmath>

#include "blr/errors.hpp"
#include "blr/exponent.hpp"
#include "blr/rng.hpp"
#include "blr/subspace.hpp"

namespace blr {

namespace {

// Lexicographic comparison for the deterministic tie-break among
// equal-score candidates.
bool lex_greater(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) > b(i);
  }
  return false;
}

}  // namespace

BasisSelection select_basis(const BLDatum& d0, int trials, std::uint64_t seed) {
  if (!d0.has_kernels()) {
    throw invalid_input("select_basis: datum has no kernels");
  }
  if (trials < 1) throw invalid_input("select_basis: need at least one trial");

  const int n = d0.ambient_dim();
  const int J = d0.factors();
  Rng rng = stream(seed, "basis");

  BasisSelection sel;
  sel.vectors = Matrix(n, 0);
  sel.margin = std::numeric_limits<double>::infinity();

  // Per-map span of the images of the prefix, refreshed each step.
  std::vector<Subspace> image_spans;
  for (int j = 0; j < J; ++j) {
    image_spans.push_back(Subspace::trivial(d0.map_rows(j)));
  }

  const auto residual_norm = [&](int j, const Vector& e) {
    const Vector y = d0.map(j) * e;
    return (y - image_spans[j].project(y)).norm();
  };

  int r = 0;
  while (r < n) {
    std::vector<int> active;
    for (int j = 0; j < J; ++j) {
      if (image_spans[j].dim() < d0.map_rows(j)) active.push_back(j);
    }
    sel.active_sets.push_back(active);

    const Subspace prefix = Subspace::span_of(sel.vectors);
    const Subspace rest = complement(prefix);

    if (active.empty()) {
      // Every image is exhausted; the remaining residuals vanish and any
      // orthonormal completion works.
      Matrix widened(n, n);
      widened.leftCols(r) = sel.vectors;
      widened.rightCols(n - r) = rest.basis();
      sel.vectors = widened;
      for (int step = r; step < n; ++step) {
        sel.step_dims.emplace_back(J, 0);
        if (step + 1 < n) sel.active_sets.emplace_back();
      }
      r = n;
      break;
    }

    Vector best(n);
    double best_score = -1.0;
    for (int t = 0; t < trials; ++t) {
      Vector z(rest.dim());
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
      const double len = z.norm();
      if (len < 1e-12) continue;
      const Vector e = rest.basis() * (z / len);
      double score = std::numeric_limits<double>::infinity();
      for (const int j : active) score = std::min(score, residual_norm(j, e));
      if (score > best_score ||
          (score == best_score && lex_greater(e, best))) {
        best_score = score;
        best = e;
      }
    }
    if (best_score < 1e-6) {
      throw selection_failed(
          "select_basis: residual margin below 1e-6 at step " + std::to_string(r + 1));
    }
    sel.margin = std::min(sel.margin, best_score);

    std::vector<int> dims(J, 0);
    for (int j = 0; j < J; ++j) {
      if (residual_norm(j, best) >= kResidualZeroTol) dims[j] = 1;
    }
    sel.step_dims.push_back(std::move(dims));

    Matrix widened(n, r + 1);
    widened.leftCols(r) = sel.vectors;
    widened.col(r) = best;
    sel.vectors = widened;
    for (int j = 0; j < J; ++j) {
      image_spans[j] = sum(image_spans[j],
                           Subspace::span_of(d0.map(j) * best));
    }
    ++r;
  }
  return sel;
}

Matrix factor_map(const BLDatum& d, const BasisSelection& sel, int j, int r) {
  const int n = d.ambient_dim();
  if (j < 0 || j >= d.factors()) throw invalid_input("factor_map: map index out of range");
  if (r < 0 || r >= n) throw invalid_input("factor_map: step index out of range");

  const Matrix prefix_images = d.map(j) * sel.vectors.leftCols(r);
  const Subspace span = Subspace::span_of(prefix_images);

  Matrix out(d.map_rows(j), n - r);
  for (int i = 0; i < n - r; ++i) {
    const Vector y = d.map(j) * sel.vectors.col(r + i);
    out.col(i) = y - span.project(y);
  }
  return out;
}

LocbdCheck verify_locbd_exponent(const BLDatum& d, const BasisSelection& sel) {
  LocbdCheck check;
  for (const auto& dims : sel.step_dims) {
    double active = 0.0;
    for (int j = 0; j < d.factors(); ++j) {
      active += d.exponent(j) * dims[j];
    }
    check.exponent += std::max(1.0 - active, 0.0);
  }
  check.match = std::abs(check.exponent - locbd_exponent(d)) <= 1e-9;
  return check;
}

}  // namespace blr
