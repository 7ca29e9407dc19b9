#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blr/datum.hpp"
#include "blr/grid.hpp"
#include "blr/kakeya.hpp"
#include "blr/lattice.hpp"

namespace blr {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Per-family block of a problem document. Missing center means "use the
// kernel of the matching map"; explicit tubes override random generation.
struct TubeFamilySpec {
  std::optional<Subspace> center;
  double nu = 0.0;
  std::optional<double> delta;
  int count = 0;
  std::optional<std::uint64_t> seed;
  std::vector<Tube> explicit_tubes;
};

struct Problem {
  BLDatum datum;
  std::vector<TubeFamilySpec> tube_specs;
};

// Problem documents carry n, p, and exactly one of maps (row-major
// matrices) or kernels (basis-vector lists), plus an optional tube_families
// block. Parse failures throw invalid_input with line/field context.
Problem parse_problem(const std::string& text);
Problem load_problem(const std::string& path);

enum class Command {
  kExponent,
  kPolytope,
  kStability,
  kWitness,
  kRatio,
  kFit,
  kKakeyaSweep,
  kKakeyaLedger,
  kBasis,
};

std::string command_name(Command c);

struct RunConfig {
  Command command = Command::kExponent;
  std::string problem_path;
  std::uint64_t seed = 0;
  GridSpec grid;                  // points_per_axis 0 = module default
  std::vector<double> r_list;     // fit
  std::vector<double> delta_list; // kakeya-sweep
  double epsilon = 0.2;
  double nu = 0.0;                // stability, kakeya-sweep
  int samples = 200;              // stability
  int budget = 32;                // ratio/fit empirical search
  int trials = 4096;              // basis
  std::vector<double> q;          // polytope
  double R = 8.0;                 // witness, ratio
  double delta = 0.0;             // kakeya-ledger
  double c_kappa = 2.0;           // kakeya-ledger
  int families = 4;               // kakeya-ledger samples per scale
  int random_per_dim = 2000;      // candidate search width
  std::string mode = "witness";   // fit: witness | empirical
  std::string out_path;           // empty = stdout
  std::string format = "json";    // json | csv
};

// The full report bytes for a config; identical configs render identical
// bytes. Throws on invalid inputs.
std::string render_report(const RunConfig& config);

// Dispatches, writes the report, and maps failures to exit codes:
// 0 success, 1 validation/parse failure, 2 resource or selection failure.
int run(const RunConfig& config);

}  // namespace blr
