#pragma once

#include <stdexcept>
#include <string>

namespace blr {

// Bad arguments or malformed problem data. The CLI maps this to exit code 1.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A request that exceeds the configured evaluation budget. Carries a grid
// size that would fit. The CLI maps this to exit code 2.
class resource_error : public std::runtime_error {
 public:
  resource_error(const std::string& what, int suggested_points_per_axis)
      : std::runtime_error(what),
        suggested_points_per_axis(suggested_points_per_axis) {}

  int suggested_points_per_axis;
};

// The randomized basis search failed to certify a positive margin.
// The CLI maps this to exit code 2.
class selection_failed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blr
