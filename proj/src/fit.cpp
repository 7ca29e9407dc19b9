#include "blr/fit.hpp"

#include <cmath>

#include "blr/errors.hpp"

namespace blr {

LogLogFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw invalid_input("fit_loglog: coordinate lists differ in length");
  }
  if (xs.size() < 3) throw invalid_input("fit_loglog: need at least three points");
  const auto count = static_cast<double>(xs.size());

  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(xs.size()), ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw invalid_input("fit_loglog: coordinates must be positive");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / count;
  const double my = sy / count;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw invalid_input("fit_loglog: abscissae are all equal");

  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
      ss_res += e * e;
    }
    fit.r2 = 1.0 - ss_res / syy;
  }
  return fit;
}

}  // namespace blr
