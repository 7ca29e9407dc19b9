#include "blr/integrate.hpp"

#include <cmath>

#include "blr/errors.hpp"
#include "blr/rng.hpp"

namespace blr {

int default_points_per_axis(int ambient_dim) {
  switch (ambient_dim) {
    case 1: return 512;
    case 2: return 256;
    case 3: return 64;
    default: return 32;
  }
}

namespace {

int resolve_points(const GridSpec& grid, int ambient_dim) {
  const int m = grid.points_per_axis > 0 ? grid.points_per_axis
                                         : default_points_per_axis(ambient_dim);
  if (m < 2 || m % 2 != 0) {
    throw invalid_input("grid: points per axis must be even and >= 2");
  }
  return m;
}

double integral_at(const BLDatum& d, const std::vector<LatticeFn>& fs, double R,
                   int m, int chunks) {
  const int n = d.ambient_dim();
  const auto integrand = [&](const double* coords) -> double {
    Vector x = Eigen::Map<const Vector>(coords, n);
    double product = 1.0;
    for (int j = 0; j < d.factors(); ++j) {
      const double pj = d.exponent(j);
      if (pj == 0.0) continue;
      const double fj = fs[j].eval(d.map(j) * x);
      if (fj == 0.0) return 0.0;
      product *= pj == 1.0 ? fj : std::pow(fj, pj);
    }
    return product;
  };
  return midpoint_sum(n, -R, R, m, chunks, integrand);
}

}  // namespace

double bl_integral(const BLDatum& d, const std::vector<LatticeFn>& fs, double R,
                   const GridSpec& grid) {
  if (R < 1.0) throw invalid_input("bl_integral: R must be >= 1");
  if (static_cast<int>(fs.size()) != d.factors()) {
    throw invalid_input("bl_integral: one input function per map required");
  }
  for (int j = 0; j < d.factors(); ++j) {
    if (fs[j].dim() != d.map_rows(j)) {
      throw invalid_input("bl_integral: input function dimension mismatch");
    }
  }
  const int m = resolve_points(grid, d.ambient_dim());
  return integral_at(d, fs, R, m, grid.parallel_chunks);
}

RatioReport bl_ratio(const BLDatum& d, const std::vector<LatticeFn>& fs, double R,
                     const GridSpec& grid) {
  RatioReport report;
  report.R = R;
  double denominator = 1.0;
  for (int j = 0; j < d.factors(); ++j) {
    const double mass = fs[j].integral();
    report.denominators.push_back(mass);
    const double pj = d.exponent(j);
    if (pj == 0.0) continue;
    if (mass <= 0.0) {
      throw invalid_input("bl_ratio: input function with positive exponent has zero mass");
    }
    denominator *= pj == 1.0 ? mass : std::pow(mass, pj);
  }

  const int m = resolve_points(grid, d.ambient_dim());
  report.integral = integral_at(d, fs, R, m, grid.parallel_chunks);
  const double coarse = integral_at(d, fs, R, m / 2, grid.parallel_chunks);
  if (report.integral != 0.0) {
    report.grid_residual = std::abs(report.integral - coarse) / std::abs(report.integral);
  } else {
    report.grid_residual = coarse == 0.0 ? 0.0 : 1.0;
  }
  report.ratio = report.integral / denominator;
  return report;
}

CandidateOpts empirical_candidate_defaults(std::uint64_t seed) {
  CandidateOpts opts;
  opts.random_per_dim = 8;
  opts.closure_cap = 64;
  opts.seed = stream_seed(seed, "empirical-candidates");
  return opts;
}

EmpiricalResult empirical_blr(const BLDatum& d, double R, const GridSpec& grid,
                              int budget, std::uint64_t seed) {
  return empirical_blr(d, R, grid, budget, seed, empirical_candidate_defaults(seed));
}

EmpiricalResult empirical_blr(const BLDatum& d, double R, const GridSpec& grid,
                              int budget, std::uint64_t seed,
                              const CandidateOpts& opts) {
  if (budget < 0) throw invalid_input("empirical_blr: negative budget");
  const CandidateSet set = candidate_subspaces(d, opts);

  EmpiricalResult result;
  bool have = false;
  const auto consider = [&](RatioReport report, std::string id) {
    if (!have || report.ratio > result.best.ratio) {
      result.best = std::move(report);
      result.witness_id = std::move(id);
      have = true;
    }
  };

  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    const WitnessSet w = witness(d, set.entries[i].space, R);
    consider(bl_ratio(d, w.fns, R, grid), "candidate:" + std::to_string(i));
  }

  const auto box = static_cast<std::int64_t>(std::ceil(R)) + 1;
  for (int b = 0; b < budget; ++b) {
    Rng rng = stream(seed, "empirical-random", static_cast<std::uint64_t>(b));
    std::vector<LatticeFn> fs;
    bool usable = true;
    for (int j = 0; j < d.factors(); ++j) {
      const int m = d.map_rows(j);
      LatticeFn f(m);
      const auto support = static_cast<int>(rng.uniform_int(1, 16));
      for (int s = 0; s < support; ++s) {
        Cell c(m);
        for (int i = 0; i < m; ++i) c[i] = rng.uniform_int(-box, box - 1);
        f.set(c, 1.0);
      }
      if (f.integral() <= 0.0 && d.exponent(j) > 0.0) usable = false;
      fs.push_back(std::move(f));
    }
    if (!usable) continue;
    consider(bl_ratio(d, fs, R, grid), "random:" + std::to_string(b));
  }
  return result;
}

GrowthFit fit_growth(const BLDatum& d, const std::vector<double>& r_list,
                     const GridSpec& grid, const FitMode& mode) {
  if (r_list.size() < 3) throw invalid_input("fit_growth: need at least three scales");
  for (std::size_t i = 1; i < r_list.size(); ++i) {
    if (!(r_list[i] > r_list[i - 1])) {
      throw invalid_input("fit_growth: scales must be strictly increasing");
    }
  }

  GrowthFit fit;
  std::vector<double> ratios;
  for (const double R : r_list) {
    RatioReport report;
    if (mode.witness_of.has_value()) {
      const WitnessSet w = witness(d, *mode.witness_of, R);
      report = bl_ratio(d, w.fns, R, grid);
    } else {
      report = empirical_blr(d, R, grid, mode.budget, mode.seed).best;
    }
    if (!(report.ratio > 0.0)) {
      throw invalid_input("fit_growth: nonpositive ratio at R = " + std::to_string(R));
    }
    ratios.push_back(report.ratio);
    fit.table.push_back(std::move(report));
  }

  const LogLogFit line = fit_loglog(r_list, ratios);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r2 = line.r2;
  return fit;
}

}  // namespace blr
