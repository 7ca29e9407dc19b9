#pragma once

#include <cstdint>
#include <string_view>

namespace blr {

// xoshiro256++ with splitmix64 seeding. Self-contained so that seeded runs
// are bit-identical across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform01();

  // Uniform in [lo, hi].
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller. Draws two uniforms per call; nothing is
  // cached, so interleaving consumers stays reproducible.
  double normal();

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t state_[4];
};

// Derives an independent stream from (seed, label, index). All randomness in
// the library flows through named streams of a single top-level seed, so
// adding one consumer never perturbs the draws seen by another.
Rng stream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

// The raw derived seed, for handing to APIs that take a seed rather than a
// generator.
std::uint64_t stream_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t index = 0);

}  // namespace blr
