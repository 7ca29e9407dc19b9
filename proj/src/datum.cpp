#include "blr/datum.hpp"

#include <cmath>

#include "blr/errors.hpp"
#include "blr/rng.hpp"

namespace blr {

BLDatum BLDatum::from_maps(int n, std::vector<Matrix> maps, std::vector<double> p) {
  if (n < 1) throw invalid_input("datum: ambient dimension must be >= 1");
  if (maps.empty()) throw invalid_input("datum: need at least one map");
  if (maps.size() != p.size()) {
    throw invalid_input("datum: maps and exponents have different lengths");
  }
  for (const auto& m : maps) {
    if (m.cols() != n) throw invalid_input("datum: map has wrong column count");
    if (!is_finite(m)) throw invalid_input("datum: non-finite map entries");
  }
  return BLDatum(n, std::move(maps), std::move(p), std::nullopt);
}

BLDatum BLDatum::from_kernels(int n, std::vector<Subspace> kernels,
                              std::vector<double> p) {
  if (n < 1) throw invalid_input("datum: ambient dimension must be >= 1");
  if (kernels.empty()) throw invalid_input("datum: need at least one kernel");
  if (kernels.size() != p.size()) {
    throw invalid_input("datum: kernels and exponents have different lengths");
  }
  std::vector<Matrix> maps;
  maps.reserve(kernels.size());
  for (const auto& k : kernels) {
    if (k.ambient_dim() != n) {
      throw invalid_input("datum: kernel has wrong ambient dimension");
    }
    if (k.dim() == n) {
      throw invalid_input("datum: kernel fills the ambient space, map would vanish");
    }
    maps.push_back(complement(k).basis().transpose());
  }
  return BLDatum(n, std::move(maps), std::move(p), std::move(kernels));
}

const std::vector<Subspace>& BLDatum::kernels() const {
  if (!kernels_) throw invalid_input("datum: no kernels stored");
  return *kernels_;
}

Subspace BLDatum::kernel_subspace(int j) const {
  if (kernels_) return kernels_->at(j);
  const Matrix& m = maps_.at(j);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = kRankTol * (top > 0.0 ? top : 1.0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++r;
  }
  return Subspace::from_orthonormal(svd.matrixV().rightCols(n_ - r));
}

ValidationReport validate(const BLDatum& d) {
  ValidationReport report;
  const int n = d.ambient_dim();
  for (int j = 0; j < d.factors(); ++j) {
    const Matrix& m = d.map(j);
    if (!is_finite(m)) {
      report.issues.push_back({j, "map has non-finite entries"});
      continue;
    }
    const int rows = static_cast<int>(m.rows());
    if (rows < 1 || rows > n) {
      report.issues.push_back({j, "map must have between 1 and n rows"});
    } else if (rank(m) != rows) {
      report.issues.push_back({j, "map is not surjective"});
    }
    const double pj = d.exponent(j);
    if (!(pj >= 0.0 && pj <= 1.0)) {
      report.issues.push_back({j, "exponent outside [0,1]"});
    }
  }
  if (d.has_kernels()) {
    for (int j = 0; j < d.factors(); ++j) {
      const Subspace& k = d.kernels()[j];
      if (k.ambient_dim() != n) {
        report.issues.push_back({j, "kernel has wrong ambient dimension"});
        continue;
      }
      if (k.dim() != n - d.map_rows(j)) {
        report.issues.push_back({j, "kernel dimension disagrees with map rows"});
      }
      if (k.dim() > 0 &&
          (d.map(j) * k.basis()).cwiseAbs().maxCoeff() > 1e-8) {
        report.issues.push_back({j, "map does not annihilate its kernel"});
      }
    }
  }
  return report;
}

BLDatum perturb(const BLDatum& d, const PerturbationSpec& spec, int index) {
  if (!d.has_kernels()) {
    throw invalid_input("perturb: datum has no kernels");
  }
  if (spec.nu < 0.0) throw invalid_input("perturb: negative radius");
  if (index < 0 || index >= spec.samples) {
    throw invalid_input("perturb: sample index out of range");
  }
  if (spec.nu == 0.0) {
    return BLDatum::from_kernels(d.ambient_dim(), d.kernels(), d.exponents());
  }
  Rng rng = stream(spec.seed, "perturb", static_cast<std::uint64_t>(index));
  std::vector<Subspace> rotated;
  rotated.reserve(d.kernels().size());
  for (const auto& k : d.kernels()) {
    rotated.push_back(perturbed_subspace(k, spec.nu, rng));
  }
  return BLDatum::from_kernels(d.ambient_dim(), std::move(rotated), d.exponents());
}

}  // namespace blr
