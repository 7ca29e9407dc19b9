#include "blr/grid.hpp"

#include <cmath>
#include <cstdlib>
#include <future>
#include <string>

#include "blr/errors.hpp"

namespace blr {

void PairwiseSum::push(double v) {
  std::size_t pos = 0;
  std::uint64_t c = count_;
  while (c & 1) {
    v += levels_[pos];
    levels_[pos] = 0.0;
    c >>= 1;
    ++pos;
  }
  if (pos == levels_.size()) {
    levels_.push_back(v);
  } else {
    levels_[pos] = v;
  }
  ++count_;
}

double PairwiseSum::total() const {
  double t = 0.0;
  for (const double v : levels_) t += v;
  return t;
}

namespace detail {

void check_grid_budget(int n, int m) {
  if (m < 1) throw invalid_input("grid: points per axis must be >= 1");
  const double bits = n * std::log2(static_cast<double>(m));
  if (bits > kGridBudgetBits + 1e-9) {
    const int suggested =
        std::max(2, static_cast<int>(std::pow(2.0, double(kGridBudgetBits) / n)) / 2 * 2);
    throw resource_error(
        "grid: " + std::to_string(m) + " points per axis in dimension " +
            std::to_string(n) + " exceeds the evaluation budget; try " +
            std::to_string(suggested),
        suggested);
  }
}

std::vector<double> axis_midpoints(double lo, double hi, int m) {
  std::vector<double> mids(m);
  const double h = (hi - lo) / m;
  for (int i = 0; i < m; ++i) mids[i] = lo + (i + 0.5) * h;
  return mids;
}

int env_worker_count() {
  const char* env = std::getenv("BLR_WORKERS");
  if (env == nullptr) return 1;
  const int count = std::atoi(env);
  return count > 0 ? count : 1;
}

double midpoint_sum(int n, double lo, double hi, int m, int chunks,
                    const std::vector<double>& axis_midpoints,
                    double (*eval)(const void*, const double*), const void* ctx) {
  check_grid_budget(n, m);
  if (chunks < 1) chunks = 1;
  const double h = (hi - lo) / m;

  std::uint64_t total_points = 1;
  for (int i = 0; i < n; ++i) total_points *= static_cast<std::uint64_t>(m);
  const auto chunk_count = static_cast<std::uint64_t>(chunks);

  const auto run_chunk = [&](std::uint64_t chunk) -> double {
    const std::uint64_t begin = total_points * chunk / chunk_count;
    const std::uint64_t end = total_points * (chunk + 1) / chunk_count;
    PairwiseSum partial;
    std::vector<double> x(n);
    std::vector<int> idx(n);
    for (std::uint64_t flat = begin; flat < end; ++flat) {
      std::uint64_t rest = flat;
      for (int axis = 0; axis < n; ++axis) {
        idx[axis] = static_cast<int>(rest % m);
        rest /= m;
        x[axis] = axis_midpoints[idx[axis]];
      }
      partial.push(eval(ctx, x.data()));
    }
    return partial.total();
  };

  std::vector<double> partials(chunks, 0.0);
  const int workers = std::min(env_worker_count(), chunks);
  if (workers <= 1) {
    for (int c = 0; c < chunks; ++c) partials[c] = run_chunk(c);
  } else {
    std::vector<std::future<void>> jobs;
    jobs.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w]() {
        for (int c = w; c < chunks; c += workers) partials[c] = run_chunk(c);
      }));
    }
    for (auto& job : jobs) job.get();
  }

  PairwiseSum total;
  for (const double p : partials) total.push(p);
  double volume = 1.0;
  for (int i = 0; i < n; ++i) volume *= h;
  return total.total() * volume;
}

}  // namespace detail

}  // namespace blr
