#include "blr/kakeya.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "blr/errors.hpp"
#include "blr/fit.hpp"
#include "blr/integrate.hpp"
#include "blr/rng.hpp"

namespace blr {

bool tube_membership(const Tube& t, const Vector& x) {
  if (x.size() != t.direction.ambient_dim() || x.size() != t.base.size()) {
    throw invalid_input("tube_membership: dimension mismatch");
  }
  const Vector r = x - t.base;
  const Vector transversal = r - t.direction.project(r);
  return transversal.norm() <= t.radius;
}

int tube_count_at(const TubeFamily& family, const Vector& x) {
  int count = 0;
  for (const auto& t : family.tubes) {
    if (tube_membership(t, x)) ++count;
  }
  return count;
}

TubeFamily random_tube_family(const Subspace& center, double nu, double delta,
                              int count, std::uint64_t seed) {
  if (count < 0) throw invalid_input("random_tube_family: negative count");
  if (nu < 0.0) throw invalid_input("random_tube_family: negative deviation");
  if (delta <= 0.0) throw invalid_input("random_tube_family: radius must be positive");

  const int n = center.ambient_dim();
  TubeFamily family;
  family.direction_center = center;
  Rng rng = stream(seed, "tubes");
  for (int i = 0; i < count; ++i) {
    Tube t;
    t.direction = nu == 0.0 ? center : perturbed_subspace(center, nu, rng);
    t.base = Vector(n);
    for (int a = 0; a < n; ++a) t.base(a) = rng.uniform(-1.0, 1.0);
    t.radius = delta;
    family.max_deviation =
        std::max(family.max_deviation, grassmann_distance(center, t.direction));
    family.tubes.push_back(std::move(t));
  }
  return family;
}

int kakeya_default_points_per_axis(int ambient_dim) {
  switch (ambient_dim) {
    case 1: return 1024;
    case 2: return 512;
    case 3: return 96;
    default: return 32;
  }
}

double overlap_integral(const std::vector<TubeFamily>& families,
                        const std::vector<double>& p, const GridSpec& grid) {
  if (families.size() != p.size()) {
    throw invalid_input("overlap_integral: one exponent per family required");
  }
  if (families.empty()) throw invalid_input("overlap_integral: no families");
  const int n = families.front().direction_center.ambient_dim();
  for (const auto& f : families) {
    if (f.direction_center.ambient_dim() != n) {
      throw invalid_input("overlap_integral: families live in different dimensions");
    }
  }
  const int m = grid.points_per_axis > 0 ? grid.points_per_axis
                                         : kakeya_default_points_per_axis(n);
  if (m < 2 || m % 2 != 0) {
    throw invalid_input("grid: points per axis must be even and >= 2");
  }

  const auto integrand = [&](const double* coords) -> double {
    const Vector x = Eigen::Map<const Vector>(coords, n);
    double product = 1.0;
    for (std::size_t j = 0; j < families.size(); ++j) {
      if (p[j] == 0.0) continue;
      const int count = tube_count_at(families[j], x);
      if (count == 0) return 0.0;
      product *= p[j] == 1.0 ? count : std::pow(static_cast<double>(count), p[j]);
    }
    return product;
  };
  return midpoint_sum(n, -1.0, 1.0, m, grid.parallel_chunks, integrand);
}

double kakeya_bound(const BLDatum& d0, double delta, const std::vector<int>& counts,
                    double epsilon, double c_eps, const CandidateOpts& opts) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw invalid_input("kakeya_bound: delta must lie in (0,1)");
  }
  if (epsilon < 0.0) throw invalid_input("kakeya_bound: negative epsilon");
  if (!(c_eps > 0.0)) throw invalid_input("kakeya_bound: constant must be positive");
  if (static_cast<int>(counts.size()) != d0.factors()) {
    throw invalid_input("kakeya_bound: one count per map required");
  }
  const double gamma = gamma_sup(d0, opts).gamma;
  double bound = c_eps * std::pow(delta, d0.ambient_dim() - epsilon - gamma);
  for (int j = 0; j < d0.factors(); ++j) {
    const double pj = d0.exponent(j);
    if (pj == 0.0) continue;
    bound *= std::pow(static_cast<double>(counts[j]), pj);
  }
  return bound;
}

TubeFamily inflate_family(const TubeFamily& f, double extra) {
  if (extra < 0.0) throw invalid_input("inflate_family: negative inflation");
  TubeFamily out = f;
  for (auto& t : out.tubes) t.radius += extra;
  return out;
}

double cell_swallowing_inflation(int ambient_dim, double delta, double omega,
                                 double c) {
  if (ambient_dim < 1 || delta <= 0.0 || !(omega > 0.0 && omega < 1.0)) {
    throw invalid_input("cell_swallowing_inflation: bad scale parameters");
  }
  const double factor = c < 0.0 ? 2.0 * std::sqrt(static_cast<double>(ambient_dim)) : c;
  return factor * delta / omega;
}

Schedule multiscale_schedule(double delta, double epsilon, double c_kappa) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw invalid_input("multiscale_schedule: delta must lie in (0,1)");
  }
  if (!(epsilon > 0.0)) throw invalid_input("multiscale_schedule: epsilon must be positive");
  if (!(c_kappa > 1.0)) throw invalid_input("multiscale_schedule: constant must exceed 1");

  Schedule s;
  s.omega = std::pow(c_kappa, -1.0 / epsilon);
  int ell = 1;
  while (delta / std::pow(s.omega, ell) < 1.0) ++ell;
  s.ell = ell;
  return s;
}

namespace {

// A pinned layout thickened to the requested radius, centered on the
// matching kernel for deviation bookkeeping.
std::vector<TubeFamily> materialize_explicit(const BLDatum& d0,
                                             const ExplicitFamilies& tubes,
                                             double radius) {
  if (static_cast<int>(tubes.size()) != d0.factors()) {
    throw invalid_input("explicit tube families: one list per map required");
  }
  std::vector<TubeFamily> families;
  for (int j = 0; j < d0.factors(); ++j) {
    TubeFamily f;
    f.j = j;
    f.direction_center = d0.kernels()[j];
    for (const Tube& t : tubes[j]) {
      Tube scaled = t;
      scaled.radius = radius;
      f.max_deviation = std::max(
          f.max_deviation, grassmann_distance(f.direction_center, scaled.direction));
      f.tubes.push_back(std::move(scaled));
    }
    families.push_back(std::move(f));
  }
  return families;
}

}  // namespace

MultiscaleLedger multiscale_ledger(const BLDatum& d0, double delta, double omega,
                                   const LedgerSampling& spec, const GridSpec& grid,
                                   std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0) || !(omega > 0.0 && omega < 1.0)) {
    throw invalid_input("multiscale_ledger: scales must lie in (0,1)");
  }
  if (!d0.has_kernels()) {
    throw invalid_input("multiscale_ledger: datum has no kernels");
  }
  if (spec.families < 1) throw invalid_input("multiscale_ledger: need at least one sample");
  const bool pinned = !spec.explicit_tubes.empty();
  if (!pinned && static_cast<int>(spec.counts.size()) != d0.factors()) {
    throw invalid_input("multiscale_ledger: one count per map required");
  }

  MultiscaleLedger ledger;
  ledger.delta = delta;
  ledger.omega = omega;
  int ell = 1;
  while (delta / std::pow(omega, ell) < 1.0) ++ell;
  ledger.ell = ell;

  const double nu = spec.nu < 0.0 ? omega : spec.nu;
  const int n = d0.ambient_dim();

  // Normalization prod (scale^{n_j} * count_j)^{p_j} at each scale.
  const auto normalizer = [&](double scale) {
    double norm = 1.0;
    for (int j = 0; j < d0.factors(); ++j) {
      const double pj = d0.exponent(j);
      if (pj == 0.0) continue;
      const double count = pinned ? static_cast<double>(spec.explicit_tubes[j].size())
                                  : static_cast<double>(spec.counts[j]);
      norm *= std::pow(std::pow(scale, d0.map_rows(j)) * count, pj);
    }
    return norm;
  };

  std::vector<double> d_hat(ell + 1, 0.0);
  for (int step = 0; step <= ell; ++step) {
    const double scale = delta / std::pow(omega, step);
    double best = 0.0;
    const int samples = pinned ? 1 : spec.families;
    for (int s = 0; s < samples; ++s) {
      std::vector<TubeFamily> families;
      if (pinned) {
        families = materialize_explicit(d0, spec.explicit_tubes, scale);
      } else {
        for (int j = 0; j < d0.factors(); ++j) {
          auto family = random_tube_family(
              d0.kernels()[j], nu, scale, spec.counts[j],
              stream_seed(seed, "ledger",
                          static_cast<std::uint64_t>(step) * 1000003 +
                              static_cast<std::uint64_t>(s) * 101 + j));
          family.j = j;
          families.push_back(std::move(family));
        }
      }
      best = std::max(best,
                      overlap_integral(families, d0.exponents(), grid) / normalizer(scale));
    }
    d_hat[step] = best;
  }

  GridSpec bl_grid;  // box-integral defaults, not the rasterizer's
  ledger.bl_hat =
      empirical_blr(d0, std::max(1.0, 1.0 / omega), bl_grid, spec.blr_budget,
                    stream_seed(seed, "ledger-blr"))
          .best.ratio;

  double np = n;
  for (int j = 0; j < d0.factors(); ++j) np -= d0.exponent(j) * d0.map_rows(j);
  const double bound_factor = std::pow(omega, np) * ledger.bl_hat;

  for (int step = 0; step < ell; ++step) {
    LedgerRow row;
    row.scale = delta / std::pow(omega, step);
    row.d_hat = d_hat[step];
    row.bound_factor = bound_factor;
    row.kappa_hat = d_hat[step + 1] > 0.0
                        ? d_hat[step] / (bound_factor * d_hat[step + 1])
                        : std::numeric_limits<double>::infinity();
    ledger.kappa_measured = std::max(ledger.kappa_measured, row.kappa_hat);
    ledger.rows.push_back(row);
  }
  return ledger;
}

namespace {

SweepReport sweep_core(
    const BLDatum& d0, const std::vector<double>& deltas,
    const std::vector<double>& counts, double epsilon, const GridSpec& grid,
    const std::function<std::vector<TubeFamily>(double, std::size_t)>& families_at);

}  // namespace

SweepReport delta_sweep(const BLDatum& d0, double nu, const std::vector<double>& deltas,
                        const std::vector<int>& counts, double epsilon,
                        const GridSpec& grid, std::uint64_t seed) {
  if (!d0.has_kernels()) throw invalid_input("delta_sweep: datum has no kernels");
  if (static_cast<int>(counts.size()) != d0.factors()) {
    throw invalid_input("delta_sweep: one count per map required");
  }
  std::vector<double> bound_counts(counts.begin(), counts.end());
  return sweep_core(
      d0, deltas, bound_counts, epsilon, grid,
      [&](double delta, std::size_t k) {
        std::vector<TubeFamily> families;
        for (int j = 0; j < d0.factors(); ++j) {
          auto family = random_tube_family(
              d0.kernels()[j], nu, delta, counts[j],
              stream_seed(seed, "sweep", k * 1009 + static_cast<std::uint64_t>(j)));
          family.j = j;
          families.push_back(std::move(family));
        }
        return families;
      });
}

SweepReport delta_sweep(const BLDatum& d0, const ExplicitFamilies& tubes,
                        const std::vector<double>& deltas, double epsilon,
                        const GridSpec& grid) {
  if (!d0.has_kernels()) throw invalid_input("delta_sweep: datum has no kernels");
  std::vector<double> bound_counts;
  for (const auto& list : tubes) bound_counts.push_back(static_cast<double>(list.size()));
  return sweep_core(d0, deltas, bound_counts, epsilon, grid,
                    [&](double delta, std::size_t) {
                      return materialize_explicit(d0, tubes, delta);
                    });
}

SweepReport delta_sweep_with(
    const BLDatum& d0,
    const std::function<std::vector<TubeFamily>(double, std::size_t)>& families_at,
    const std::vector<double>& bound_counts, const std::vector<double>& deltas,
    double epsilon, const GridSpec& grid) {
  return sweep_core(d0, deltas, bound_counts, epsilon, grid, families_at);
}

namespace {

SweepReport sweep_core(
    const BLDatum& d0, const std::vector<double>& deltas,
    const std::vector<double>& counts, double epsilon, const GridSpec& grid,
    const std::function<std::vector<TubeFamily>(double, std::size_t)>& families_at) {
  if (deltas.size() < 3) throw invalid_input("delta_sweep: need at least three radii");
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] > deltas[i - 1])) {
      throw invalid_input("delta_sweep: radii must be strictly increasing");
    }
  }
  if (static_cast<int>(counts.size()) != d0.factors()) {
    throw invalid_input("delta_sweep: one count per map required");
  }

  SweepReport report;
  const double gamma = gamma_sup(d0).gamma;
  report.predicted_slope = d0.ambient_dim() - gamma;

  std::vector<double> overlaps;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    overlaps.push_back(
        overlap_integral(families_at(deltas[k], k), d0.exponents(), grid));
  }

  // Raw bound shape with unit constant; the constant is calibrated so the
  // bound touches the measured overlap at the largest radius.
  const auto raw_bound = [&](double delta) {
    double b = std::pow(delta, d0.ambient_dim() - epsilon - gamma);
    for (int j = 0; j < d0.factors(); ++j) {
      const double pj = d0.exponent(j);
      if (pj == 0.0) continue;
      b *= std::pow(counts[j], pj);
    }
    return b;
  };
  const double anchor = raw_bound(deltas.back());
  report.calibrated_c = anchor > 0.0 ? overlaps.back() / anchor : 0.0;

  for (std::size_t k = 0; k < deltas.size(); ++k) {
    SweepRow row;
    row.delta = deltas[k];
    row.overlap = overlaps[k];
    row.bound = report.calibrated_c * raw_bound(deltas[k]);
    row.ratio = row.bound > 0.0 ? row.overlap / row.bound : 0.0;
    report.rows.push_back(row);
  }

  const LogLogFit fit = fit_loglog(deltas, overlaps);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  report.r2 = fit.r2;
  return report;
}

}  // namespace

}  // namespace blr
