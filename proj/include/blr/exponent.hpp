#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blr/datum.hpp"
#include "blr/subspace.hpp"

namespace blr {

enum class Provenance { kTrivial, kFull, kKernel, kClosure, kCoordinate, kRandom, kUser };

std::string provenance_name(Provenance p);

struct Candidate {
  Subspace space;
  Provenance origin;
};

// Finite stand-in for the supremum over all subspaces: the kernels, their
// closure under sum/intersection, coordinate subspaces in low dimension,
// and seeded random draws. The reported supremum is a certified lower bound
// for the true one.
struct CandidateSet {
  std::vector<Candidate> entries;
  bool closure_truncated = false;
};

struct CandidateOpts {
  int random_per_dim = 2000;
  int closure_cap = 256;
  std::vector<Subspace> extra;
  std::uint64_t seed = 0;
  double rank_tol = kRankTol;
  bool coordinate_subspaces = true;  // enumerated only when n <= 12
};

struct CandidateRow {
  int id = 0;
  int dim = 0;
  std::vector<int> image_dims;
  double value = 0.0;
  Provenance origin = Provenance::kTrivial;
};

enum class Certification { kLatticeEnumerated, kLatticeSampled };

struct ExponentReport {
  double gamma = 0.0;
  int argmax_id = 0;
  Subspace argmax = Subspace::trivial(0);
  std::vector<CandidateRow> per_candidate;
  Certification certification = Certification::kLatticeEnumerated;
  bool closure_truncated = false;
};

// dim V - sum_j p_j dim pi_j(V).
double gamma_of(const BLDatum& d, const Subspace& v, double rank_tol = kRankTol);

CandidateSet candidate_subspaces(const BLDatum& d, const CandidateOpts& opts = {});

// Maximum of gamma_of over the candidate set. Ties resolve to the smallest
// dimension, then first construction order.
ExponentReport gamma_sup(const BLDatum& d, const CandidateOpts& opts = {});

// sum_{r=1}^n max(1 - sum_{j : n_j >= r} p_j, 0).
double locbd_exponent(const BLDatum& d);

struct PolytopeResult {
  bool contains = false;
  // On a candidate violation: the candidate and the (negative) slack
  // n - sum q_j n_j - (dim V - sum q_j dim pi_j(V)).
  int witness_id = -1;
  Subspace witness = Subspace::trivial(0);
  double slack = 0.0;
  std::string reason;  // "", "box", or "halfspace"
};

// Membership of q in the feasibility polytope cut out by the box [0,1]^J and
// one halfspace per candidate subspace.
PolytopeResult bl_polytope_contains(const BLDatum& d, const std::vector<double>& q,
                                    const CandidateOpts& opts = {});

struct StabilitySample {
  double distance = 0.0;  // max over j of the kernel displacement
  double gamma = 0.0;
};

struct StabilityReport {
  double gamma_base = 0.0;
  double max_gamma = 0.0;
  int violations = 0;  // samples with gamma > gamma_base + 1e-6
  std::vector<StabilitySample> samples;
};

// Recomputes the exponent over spec.samples kernel perturbations, rebuilding
// the candidate set per sample and carrying the base argmax over.
StabilityReport stability_scan(const BLDatum& d, const PerturbationSpec& spec,
                               const CandidateOpts& opts = {});

// Largest radius in {2^-k : k = 1..20} whose 200-sample scan is clean;
// 0 when none is.
double nu_estimate(const BLDatum& d, std::uint64_t seed);

inline constexpr double kStabilityTol = 1e-6;

}  // namespace blr
