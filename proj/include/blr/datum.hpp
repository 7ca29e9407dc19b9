#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blr/matrix.hpp"
#include "blr/subspace.hpp"

namespace blr {

// Radius, seed and sample count for a kernel-perturbation sweep.
struct PerturbationSpec {
  double nu = 0.0;
  std::uint64_t seed = 0;
  int samples = 1;
};

// A tuple of surjective linear maps pi_j: R^n -> R^{n_j} with exponents
// p_j in [0,1]. When the maps are orthogonal projections their kernels are
// stored alongside; the perturbation and tube machinery require them.
class BLDatum {
 public:
  static BLDatum from_maps(int n, std::vector<Matrix> maps, std::vector<double> p);

  // Builds the maps as orthogonal projections onto the kernel complements;
  // every map then has operator norm 1 and rows n - dim(kernel).
  static BLDatum from_kernels(int n, std::vector<Subspace> kernels,
                              std::vector<double> p);

  int ambient_dim() const { return n_; }
  int factors() const { return static_cast<int>(maps_.size()); }
  const std::vector<Matrix>& maps() const { return maps_; }
  const Matrix& map(int j) const { return maps_.at(j); }
  int map_rows(int j) const { return static_cast<int>(maps_.at(j).rows()); }
  const std::vector<double>& exponents() const { return p_; }
  double exponent(int j) const { return p_.at(j); }

  bool has_kernels() const { return kernels_.has_value(); }
  const std::vector<Subspace>& kernels() const;

  // ker(pi_j): the stored kernel when present, otherwise computed from the
  // map's nullspace.
  Subspace kernel_subspace(int j) const;

 private:
  BLDatum(int n, std::vector<Matrix> maps, std::vector<double> p,
          std::optional<std::vector<Subspace>> kernels)
      : n_(n), maps_(std::move(maps)), p_(std::move(p)),
        kernels_(std::move(kernels)) {}

  int n_;
  std::vector<Matrix> maps_;
  std::vector<double> p_;
  std::optional<std::vector<Subspace>> kernels_;
};

struct ValidationIssue {
  int index;  // map index, or -1 for datum-level issues
  std::string what;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Checks surjectivity of every map, the exponent range, and (when kernels
// are stored) that each map annihilates its kernel. Failures are listed in
// the report rather than thrown.
ValidationReport validate(const BLDatum& d);

// Replaces every kernel by a rotation at Grassmann distance <= spec.nu
// (hitting the radius up to bisection accuracy) and rebuilds the maps as
// orthogonal projections. Deterministic per (spec.seed, index).
BLDatum perturb(const BLDatum& d, const PerturbationSpec& spec, int index);

}  // namespace blr
