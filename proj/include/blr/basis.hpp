#pragma once

#include <cstdint>
#include <vector>

#include "blr/datum.hpp"
#include "blr/matrix.hpp"

namespace blr {

// Output of the greedy basis search: an orthonormal basis e_1..e_n whose
// projected residuals split cleanly into zero and bounded-below steps.
struct BasisSelection {
  Matrix vectors;  // n x n, columns are e_1..e_n
  double margin = 0.0;
  // step_dims[r][j] = dim of the span of the step-(r+1) residual of pi_j,
  // which is 0 or 1.
  std::vector<std::vector<int>> step_dims;
  // The index sets that guided each choice: active[r] lists the maps whose
  // image was not yet exhausted by e_1..e_r.
  std::vector<std::vector<int>> active_sets;
};

// Residuals below this are treated as the exact-zero branch of the step
// dichotomy.
inline constexpr double kResidualZeroTol = 1e-7;

// Greedy maximin basis selection: e_{r+1} maximizes, over `trials` unit
// vectors drawn in the orthocomplement of <e_1..e_r>, the smallest residual
// |P_{<pi_j(e_1)..pi_j(e_r)> perp} pi_j(e_{r+1})| over the still-active maps.
// Once every map is exhausted the basis is completed with the complement.
// Throws selection_failed when the certified margin drops below 1e-6.
BasisSelection select_basis(const BLDatum& d0, int trials, std::uint64_t seed);

// Matrix of the step-r factor map: columns are the residuals
// P_{<pi_j(e_1)..pi_j(e_r)> perp} pi_j(e_{r+i}) for i = 1..n-r, an
// n_j x (n - r) matrix. r = 0 recovers pi_j expressed in the chosen basis.
Matrix factor_map(const BLDatum& d, const BasisSelection& sel, int j, int r);

struct LocbdCheck {
  double exponent = 0.0;
  bool match = false;
};

// Recomputes sum_r max(1 - sum_j p_j * step_dims[r][j], 0) from the measured
// step dimensions and flags agreement with locbd_exponent within 1e-9.
LocbdCheck verify_locbd_exponent(const BLDatum& d, const BasisSelection& sel);

}  // namespace blr
