#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blr/datum.hpp"
#include "blr/exponent.hpp"
#include "blr/fit.hpp"
#include "blr/grid.hpp"
#include "blr/lattice.hpp"

namespace blr {

// Default resolution for the box integrals: 256 / 64 / 32 points per axis
// for n = 2 / 3 / 4, halving again beyond that.
int default_points_per_axis(int ambient_dim);

struct RatioReport {
  double R = 0.0;
  double integral = 0.0;
  std::vector<double> denominators;
  double ratio = 0.0;
  // |estimate(M) - estimate(M/2)| / estimate(M) for the numerator.
  double grid_residual = 0.0;
};

// Midpoint-rule integral of prod_j f_j(pi_j x)^{p_j} over [-R, R]^n.
// Factors with p_j = 0 are omitted.
double bl_integral(const BLDatum& d, const std::vector<LatticeFn>& fs, double R,
                   const GridSpec& grid);

// The regularized ratio: the integral above divided by
// prod_j (integral f_j)^{p_j}.
RatioReport bl_ratio(const BLDatum& d, const std::vector<LatticeFn>& fs, double R,
                     const GridSpec& grid);

struct EmpiricalResult {
  RatioReport best;
  std::string witness_id;
};

// Candidate options for the empirical supremum: the structured candidates
// plus a thin random layer, since each candidate costs a full grid pass.
CandidateOpts empirical_candidate_defaults(std::uint64_t seed);

// Best ratio over the witnesses of every candidate subspace plus `budget`
// random sparse indicator tuples. Deterministic per seed.
EmpiricalResult empirical_blr(const BLDatum& d, double R, const GridSpec& grid,
                              int budget, std::uint64_t seed);
EmpiricalResult empirical_blr(const BLDatum& d, double R, const GridSpec& grid,
                              int budget, std::uint64_t seed,
                              const CandidateOpts& opts);

// witness_of set: ratios of that subspace's witness per R.
// witness_of empty: empirical search per R with the given budget.
struct FitMode {
  std::optional<Subspace> witness_of;
  int budget = 32;
  std::uint64_t seed = 0;
};

struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<RatioReport> table;
};

// Least-squares slope of log(ratio) against log(R) over a strictly
// increasing list of at least three scales.
GrowthFit fit_growth(const BLDatum& d, const std::vector<double>& r_list,
                     const GridSpec& grid, const FitMode& mode);

}  // namespace blr
