#pragma once

#include <vector>

namespace blr {

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

// Ordinary least squares on (log x, log y). Requires at least three strictly
// positive points. Constant data fits exactly with slope 0.
LogLogFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace blr
