#include "blr/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "blr/errors.hpp"
#include "blr/rng.hpp"

namespace blr {

namespace {

constexpr double kDedupTol = 1e-8;

// Cheap linear signature of a projection matrix: |sig(P) - sig(Q)| is
// bounded by the Frobenius distance, so near-duplicates land next to each
// other once sorted by signature.
double projection_signature(const Matrix& p, const Matrix& weights) {
  return (p.cwiseProduct(weights)).sum();
}

Matrix signature_weights(int n) {
  Rng rng = stream(0x5157ull, "dedup-signature");
  Matrix w(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) w(r, c) = rng.normal();
  }
  w /= w.norm();
  return w;
}

// Marks later entries whose projection matrix matches an earlier one within
// kDedupTol (Frobenius). Returns keep flags in construction order.
std::vector<char> dedup_flags(const std::vector<Candidate>& entries) {
  const int count = static_cast<int>(entries.size());
  std::vector<char> keep(count, 1);
  if (count == 0) return keep;
  const int n = entries.front().space.ambient_dim();
  const Matrix weights = signature_weights(n);

  std::vector<Matrix> projections(count);
  std::vector<double> sig(count);
  for (int i = 0; i < count; ++i) {
    projections[i] = entries[i].space.projection();
    sig[i] = projection_signature(projections[i], weights);
  }
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return sig[a] < sig[b]; });

  for (int a = 0; a < count; ++a) {
    const int i = order[a];
    for (int b = a + 1; b < count; ++b) {
      const int j = order[b];
      if (sig[j] - sig[i] > kDedupTol) break;
      if (entries[i].space.dim() != entries[j].space.dim()) continue;
      if ((projections[i] - projections[j]).norm() < kDedupTol) {
        // The later-constructed entry is the duplicate.
        keep[std::max(i, j)] = 0;
      }
    }
  }
  return keep;
}

bool known(const std::vector<Candidate>& entries, const Subspace& s) {
  for (const auto& e : entries) {
    if (e.space.dim() == s.dim() &&
        (e.space.projection() - s.projection()).norm() < kDedupTol) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kTrivial: return "trivial";
    case Provenance::kFull: return "full";
    case Provenance::kKernel: return "kernel";
    case Provenance::kClosure: return "lattice-closure";
    case Provenance::kCoordinate: return "coordinate";
    case Provenance::kRandom: return "random";
    case Provenance::kUser: return "user";
  }
  return "unknown";
}

double gamma_of(const BLDatum& d, const Subspace& v, double rank_tol) {
  if (v.ambient_dim() != d.ambient_dim()) {
    throw invalid_input("gamma_of: subspace has wrong ambient dimension");
  }
  double value = v.dim();
  for (int j = 0; j < d.factors(); ++j) {
    value -= d.exponent(j) * image_dim(d.map(j), v, rank_tol);
  }
  return value;
}

CandidateSet candidate_subspaces(const BLDatum& d, const CandidateOpts& opts) {
  const int n = d.ambient_dim();
  CandidateSet set;
  auto& entries = set.entries;

  entries.push_back({Subspace::trivial(n), Provenance::kTrivial});
  entries.push_back({Subspace::full(n), Provenance::kFull});

  // Kernels and their closure under sum/intersection. The closure worklist
  // is deduplicated eagerly so the cap counts genuinely new subspaces.
  std::vector<Candidate> lattice;
  for (int j = 0; j < d.factors(); ++j) {
    const Subspace k = d.kernel_subspace(j);
    if (!known(lattice, k)) lattice.push_back({k, Provenance::kKernel});
  }
  int fresh = 0;
  std::size_t frontier_start = 0;
  while (frontier_start < lattice.size() && fresh < opts.closure_cap) {
    const std::size_t frontier_end = lattice.size();
    for (std::size_t a = frontier_start; a < frontier_end && fresh < opts.closure_cap; ++a) {
      for (std::size_t b = 0; b < a && fresh < opts.closure_cap; ++b) {
        for (const Subspace& made :
             {sum(lattice[a].space, lattice[b].space),
              intersect(lattice[a].space, lattice[b].space)}) {
          if (fresh >= opts.closure_cap) {
            set.closure_truncated = true;
            break;
          }
          if (made.dim() == 0 || made.dim() == n) continue;  // already present
          if (!known(lattice, made)) {
            lattice.push_back({made, Provenance::kClosure});
            ++fresh;
          }
        }
      }
    }
    if (lattice.size() == frontier_end) break;
    frontier_start = frontier_end;
  }
  if (fresh >= opts.closure_cap) set.closure_truncated = true;
  for (auto& c : lattice) entries.push_back(std::move(c));

  if (opts.coordinate_subspaces && n <= 12) {
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
      Matrix basis(n, __builtin_popcount(mask));
      basis.setZero();
      int col = 0;
      for (int axis = 0; axis < n; ++axis) {
        if (mask & (1u << axis)) basis(axis, col++) = 1.0;
      }
      entries.push_back({Subspace::from_orthonormal(basis), Provenance::kCoordinate});
    }
  }

  Rng rng = stream(opts.seed, "candidates");
  for (int k = 1; k < n; ++k) {
    for (int i = 0; i < opts.random_per_dim; ++i) {
      entries.push_back({random_subspace(n, k, rng), Provenance::kRandom});
    }
  }

  for (const auto& user : opts.extra) {
    if (user.ambient_dim() != n) {
      throw invalid_input("candidate_subspaces: extra subspace has wrong ambient dimension");
    }
    entries.push_back({user, Provenance::kUser});
  }

  const std::vector<char> keep = dedup_flags(entries);
  std::vector<Candidate> unique;
  unique.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (keep[i]) unique.push_back(std::move(entries[i]));
  }
  set.entries = std::move(unique);
  return set;
}

namespace {

std::vector<CandidateRow> evaluate_candidates(const BLDatum& d,
                                              const CandidateSet& set,
                                              double rank_tol) {
  std::vector<CandidateRow> rows;
  rows.reserve(set.entries.size());
  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    const auto& cand = set.entries[i];
    CandidateRow row;
    row.id = static_cast<int>(i);
    row.dim = cand.space.dim();
    row.origin = cand.origin;
    double value = row.dim;
    for (int j = 0; j < d.factors(); ++j) {
      const int dj = image_dim(d.map(j), cand.space, rank_tol);
      row.image_dims.push_back(dj);
      value -= d.exponent(j) * dj;
    }
    row.value = value;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ExponentReport gamma_sup(const BLDatum& d, const CandidateOpts& opts) {
  const CandidateSet set = candidate_subspaces(d, opts);
  ExponentReport report;
  report.per_candidate = evaluate_candidates(d, set, opts.rank_tol);
  report.closure_truncated = set.closure_truncated;

  int best = 0;
  for (std::size_t i = 1; i < report.per_candidate.size(); ++i) {
    const auto& row = report.per_candidate[i];
    const auto& top = report.per_candidate[best];
    if (row.value > top.value ||
        (row.value == top.value && row.dim < top.dim)) {
      best = static_cast<int>(i);
    }
  }
  report.gamma = report.per_candidate[best].value;
  report.argmax_id = report.per_candidate[best].id;
  report.argmax = set.entries[best].space;

  double best_structured = -1e300;
  double best_random = -1e300;
  for (const auto& row : report.per_candidate) {
    if (row.origin == Provenance::kRandom) {
      best_random = std::max(best_random, row.value);
    } else {
      best_structured = std::max(best_structured, row.value);
    }
  }
  report.certification = best_random > best_structured + 1e-6
                             ? Certification::kLatticeSampled
                             : Certification::kLatticeEnumerated;
  return report;
}

double locbd_exponent(const BLDatum& d) {
  const int n = d.ambient_dim();
  double total = 0.0;
  for (int r = 1; r <= n; ++r) {
    double active = 0.0;
    for (int j = 0; j < d.factors(); ++j) {
      if (d.map_rows(j) >= r) active += d.exponent(j);
    }
    total += std::max(1.0 - active, 0.0);
  }
  return total;
}

PolytopeResult bl_polytope_contains(const BLDatum& d, const std::vector<double>& q,
                                    const CandidateOpts& opts) {
  if (static_cast<int>(q.size()) != d.factors()) {
    throw invalid_input("bl_polytope_contains: q has wrong length");
  }
  PolytopeResult result;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (!(q[j] >= 0.0 && q[j] <= 1.0)) {
      result.contains = false;
      result.reason = "box";
      result.slack = q[j] < 0.0 ? q[j] : 1.0 - q[j];
      return result;
    }
  }
  double lhs = d.ambient_dim();
  for (int j = 0; j < d.factors(); ++j) lhs -= q[j] * d.map_rows(j);

  // Report the worst violated halfspace, not the first one encountered.
  const CandidateSet set = candidate_subspaces(d, opts);
  result.contains = true;
  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    const Subspace& v = set.entries[i].space;
    double rhs = v.dim();
    for (int j = 0; j < d.factors(); ++j) {
      rhs -= q[j] * image_dim(d.map(j), v, opts.rank_tol);
    }
    const double slack = lhs - rhs;
    if (slack < -1e-12 && (result.contains || slack < result.slack)) {
      result.contains = false;
      result.reason = "halfspace";
      result.witness_id = static_cast<int>(i);
      result.witness = v;
      result.slack = slack;
    }
  }
  return result;
}

StabilityReport stability_scan(const BLDatum& d, const PerturbationSpec& spec,
                               const CandidateOpts& opts) {
  if (!d.has_kernels()) throw invalid_input("stability_scan: datum has no kernels");
  const ExponentReport base = gamma_sup(d, opts);

  StabilityReport report;
  report.gamma_base = base.gamma;
  report.max_gamma = base.gamma;

  for (int i = 0; i < spec.samples; ++i) {
    const BLDatum sample = perturb(d, spec, i);
    CandidateOpts sample_opts = opts;
    sample_opts.seed = stream_seed(opts.seed, "scan", static_cast<std::uint64_t>(i));
    sample_opts.extra.push_back(base.argmax);
    const double gamma = gamma_sup(sample, sample_opts).gamma;

    double distance = 0.0;
    for (int j = 0; j < d.factors(); ++j) {
      distance = std::max(
          distance, grassmann_distance(d.kernels()[j], sample.kernels()[j]));
    }
    report.samples.push_back({distance, gamma});
    report.max_gamma = std::max(report.max_gamma, gamma);
    if (gamma > base.gamma + kStabilityTol) ++report.violations;
  }
  return report;
}

double nu_estimate(const BLDatum& d, std::uint64_t seed) {
  CandidateOpts opts;
  opts.seed = stream_seed(seed, "nu-estimate");
  for (int k = 1; k <= 20; ++k) {
    const double nu = std::ldexp(1.0, -k);
    PerturbationSpec spec{nu, seed, 200};
    if (stability_scan(d, spec, opts).violations == 0) return nu;
  }
  return 0.0;
}

}  // namespace blr
