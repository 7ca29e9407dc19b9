#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "blr/datum.hpp"
#include "blr/exponent.hpp"
#include "blr/grid.hpp"
#include "blr/subspace.hpp"

namespace blr {

// The delta-neighborhood of an affine subspace: base + direction, thickened
// transversally by `radius`.
struct Tube {
  Subspace direction = Subspace::trivial(0);
  Vector base;
  double radius = 0.0;
};

// |P_{direction perp}(x - base)| <= radius.
bool tube_membership(const Tube& t, const Vector& x);

// A finite collection of tubes of common radius whose directions stay within
// max_deviation of a center subspace.
struct TubeFamily {
  int j = 0;
  std::vector<Tube> tubes;
  Subspace direction_center = Subspace::trivial(0);
  double max_deviation = 0.0;

  double radius() const { return tubes.empty() ? 0.0 : tubes.front().radius; }
};

// Tube count per point of x: #{T in family : x in T}.
int tube_count_at(const TubeFamily& family, const Vector& x);

// `count` tubes with directions at distance <= nu from the center and bases
// uniform in [-1,1]^n. Deterministic per seed.
TubeFamily random_tube_family(const Subspace& center, double nu, double delta,
                              int count, std::uint64_t seed);

// Default resolution for the tube overlap integrals: 512 / 96 points per
// axis for n = 2 / 3, then 32.
int kakeya_default_points_per_axis(int ambient_dim);

// Midpoint-rule estimate of the overlap integral over [-1,1]^n:
// prod_j N_j(x)^{p_j} with factors omitted where p_j = 0.
double overlap_integral(const std::vector<TubeFamily>& families,
                        const std::vector<double>& p, const GridSpec& grid);

// The growth-law ceiling for the overlap integral:
// c_eps * delta^{n - epsilon} * delta^{-gamma} * prod counts_j^{p_j}, with
// gamma the candidate-set exponent of the datum.
double kakeya_bound(const BLDatum& d0, double delta, const std::vector<int>& counts,
                    double epsilon, double c_eps, const CandidateOpts& opts = {});

// Same tubes with radius + extra (the Minkowski sum of a slab neighborhood
// with a ball is a radius increase).
TubeFamily inflate_family(const TubeFamily& f, double extra);

// Inflation radius c * delta / omega large enough that any axis-parallel
// cell of side delta/omega touching a radius-delta tube is swallowed whole
// by the inflated tube. c < 0 selects the default 2 * sqrt(n).
double cell_swallowing_inflation(int ambient_dim, double delta, double omega,
                                 double c = -1.0);

struct Schedule {
  double omega = 0.0;
  int ell = 0;
};

// omega = c_kappa^{-1/epsilon}; ell the smallest integer with
// delta / omega^ell >= 1.
Schedule multiscale_schedule(double delta, double epsilon, double c_kappa);

struct LedgerRow {
  double scale = 0.0;        // tube radius at this step
  double d_hat = 0.0;        // measured normalized overlap constant
  double bound_factor = 0.0; // omega^{n - sum p_j n_j} * BL_hat(1/omega)
  double kappa_hat = 0.0;    // d_hat / (bound_factor * d_hat at the next scale)
};

// Measured walk down the scale recursion. The per-step constants are
// recorded, never asserted: every measured quantity is a sampled lower
// surrogate of a supremum.
struct MultiscaleLedger {
  double delta = 0.0;
  double omega = 0.0;
  int ell = 0;
  double bl_hat = 0.0;          // empirical ratio at R = 1/omega
  double kappa_measured = 0.0;  // max of the per-step kappa_hat
  std::vector<LedgerRow> rows;
};

// Tube layouts pinned ahead of time, one list per map: the same directions
// and bases are reused at every scale with the radius swapped in.
using ExplicitFamilies = std::vector<std::vector<Tube>>;

struct LedgerSampling {
  int families = 4;             // family tuples sampled per scale
  std::vector<int> counts;      // tubes per family, one entry per map
  double nu = -1.0;             // direction deviation; < 0 means use omega
  int blr_budget = 8;           // random tuples inside the BL_hat search
  ExplicitFamilies explicit_tubes;  // non-empty: used instead of sampling
};

MultiscaleLedger multiscale_ledger(const BLDatum& d0, double delta, double omega,
                                   const LedgerSampling& spec, const GridSpec& grid,
                                   std::uint64_t seed);

struct SweepRow {
  double delta = 0.0;
  double overlap = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // overlap / bound
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double predicted_slope = 0.0;  // n - gamma
  double calibrated_c = 0.0;     // c_eps fitted at the largest delta
};

// Random families at each delta, the fitted log-log slope of the overlap,
// and the bound line with its constant calibrated at the largest delta.
SweepReport delta_sweep(const BLDatum& d0, double nu, const std::vector<double>& deltas,
                        const std::vector<int>& counts, double epsilon,
                        const GridSpec& grid, std::uint64_t seed);

// Same sweep over a pinned tube layout re-thickened at each delta.
SweepReport delta_sweep(const BLDatum& d0, const ExplicitFamilies& tubes,
                        const std::vector<double>& deltas, double epsilon,
                        const GridSpec& grid);

// Generalized sweep over caller-provided families per (delta, index);
// bound_counts enter the growth-law normalization.
SweepReport delta_sweep_with(
    const BLDatum& d0,
    const std::function<std::vector<TubeFamily>(double, std::size_t)>& families_at,
    const std::vector<double>& bound_counts, const std::vector<double>& deltas,
    double epsilon, const GridSpec& grid);

}  // namespace blr
