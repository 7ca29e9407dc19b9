#pragma once

#include <cstdint>
#include <vector>

namespace blr {

// Uniform midpoint grid. points_per_axis = 0 requests the per-dimension
// default of the calling module. Evaluation is split into parallel_chunks
// slabs whose partial sums are combined in chunk order, so results are
// bit-stable for a fixed (points, chunks) pair regardless of worker count.
struct GridSpec {
  int points_per_axis = 0;
  int parallel_chunks = 8;
};

// Grid sizes are capped so the total point count stays within 2^26.
inline constexpr int kGridBudgetBits = 26;

// Streaming pairwise summation: O(log n) state, one fixed combine order.
class PairwiseSum {
 public:
  void push(double v);
  double total() const;

 private:
  std::vector<double> levels_;
  std::uint64_t count_ = 0;
};

namespace detail {

// Midpoint-rule sum of `integrand(x)` over [lo, hi]^n with m points per
// axis, multiplied by the cell volume. The integrand receives the midpoint
// coordinates; chunk partials are reduced in index order. Throws
// resource_error when m^n exceeds the budget.
double midpoint_sum(int n, double lo, double hi, int m, int chunks,
                    const std::vector<double>& axis_midpoints,
                    double (*eval)(const void*, const double*), const void* ctx);

std::vector<double> axis_midpoints(double lo, double hi, int m);

void check_grid_budget(int n, int m);

int env_worker_count();

}  // namespace detail

// Type-safe front end over the detail plumbing.
template <typename F>
double midpoint_sum(int n, double lo, double hi, int m, int chunks, const F& f) {
  const auto mids = detail::axis_midpoints(lo, hi, m);
  const auto call = [](const void* ctx, const double* x) -> double {
    return (*static_cast<const F*>(ctx))(x);
  };
  return detail::midpoint_sum(n, lo, hi, m, chunks, mids, call, &f);
}

}  // namespace blr
