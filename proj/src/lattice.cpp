#include "blr/lattice.hpp"

#include <cmath>

#include "blr/errors.hpp"

namespace blr {

LatticeFn::LatticeFn(int m) : m_(m) {
  if (m < 0) throw invalid_input("lattice function: negative dimension");
}

LatticeFn LatticeFn::indicator(int m, const std::vector<Cell>& cells) {
  LatticeFn f(m);
  for (const auto& c : cells) f.set(c, 1.0);
  return f;
}

void LatticeFn::set(const Cell& v, double value) {
  if (static_cast<int>(v.size()) != m_) {
    throw invalid_input("lattice function: cell has wrong dimension");
  }
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw invalid_input("lattice function: cell values must be finite and >= 0");
  }
  if (value == 0.0) {
    cells_.erase(v);
  } else {
    cells_[v] = value;
  }
}

double LatticeFn::cell_value(const Cell& v) const {
  const auto it = cells_.find(v);
  return it == cells_.end() ? 0.0 : it->second;
}

double LatticeFn::eval(const Vector& x) const {
  if (static_cast<int>(x.size()) != m_) {
    throw invalid_input("lattice function: point has wrong dimension");
  }
  Cell c(m_);
  for (int i = 0; i < m_; ++i) {
    c[i] = static_cast<std::int64_t>(std::floor(x(i)));
  }
  return cell_value(c);
}

double LatticeFn::integral() const {
  double total = 0.0;
  for (const auto& [cell, value] : cells_) total += value;
  return total;
}

namespace {

// Window origins v with v <= c < v + A along one axis, i.e. the integers in
// (c - A, c].
std::pair<std::int64_t, std::int64_t> covering_range(std::int64_t c, double a) {
  const auto lo = static_cast<std::int64_t>(std::floor(static_cast<double>(c) - a)) + 1;
  return {lo, c};
}

}  // namespace

double norm_window(const LatticeFn& f, double a) {
  if (a < 1.0) throw invalid_input("norm_window: window size must be >= 1");
  const int m = f.dim();
  std::map<Cell, double> window_max;
  for (const auto& [cell, value] : f.cells()) {
    std::vector<std::pair<std::int64_t, std::int64_t>> ranges(m);
    Cell v(m);
    for (int i = 0; i < m; ++i) {
      ranges[i] = covering_range(cell[i], a);
      v[i] = ranges[i].first;
    }
    // Walk the box of window origins covering this cell.
    while (true) {
      auto [it, inserted] = window_max.try_emplace(v, value);
      if (!inserted && value > it->second) it->second = value;
      int axis = 0;
      for (; axis < m; ++axis) {
        if (v[axis] < ranges[axis].second) {
          ++v[axis];
          break;
        }
        v[axis] = ranges[axis].first;
      }
      if (axis == m) break;
    }
  }
  double total = 0.0;
  for (const auto& [v, value] : window_max) total += value;
  return total;
}

double norm_window(const LatticeFn& f, double a, const std::vector<Cell>& lattice) {
  if (a < 1.0) throw invalid_input("norm_window: window size must be >= 1");
  const int m = f.dim();
  double total = 0.0;
  for (const auto& v : lattice) {
    if (static_cast<int>(v.size()) != m) {
      throw invalid_input("norm_window: lattice point has wrong dimension");
    }
    double best = 0.0;
    for (const auto& [cell, value] : f.cells()) {
      bool covered = true;
      for (int i = 0; i < m; ++i) {
        if (cell[i] < v[i] || static_cast<double>(cell[i]) >= v[i] + a) {
          covered = false;
          break;
        }
      }
      if (covered && value > best) best = value;
    }
    total += best;
  }
  return total;
}

WitnessSet witness(const BLDatum& d, const Subspace& v, double R) {
  if (R < 1.0) throw invalid_input("witness: R must be >= 1");
  if (v.ambient_dim() != d.ambient_dim()) {
    throw invalid_input("witness: subspace has wrong ambient dimension");
  }
  const double sqrt_n = std::sqrt(static_cast<double>(d.ambient_dim()));
  const double long_bound = R + sqrt_n;
  const double short_bound = 1.0 + sqrt_n;
  // Any admissible cell lies inside the ball of radius
  // sqrt(long_bound^2 + short_bound^2).
  const auto box = static_cast<std::int64_t>(
      std::floor(std::sqrt(long_bound * long_bound + short_bound * short_bound)));

  WitnessSet w;
  w.v = v;
  w.R = R;

  for (int j = 0; j < d.factors(); ++j) {
    const int m = d.map_rows(j);
    const Subspace img = image(d.map(j), v);
    const Matrix p_long = img.projection();
    const Matrix p_short = Matrix::Identity(m, m) - p_long;

    double total_cells = 1.0;
    for (int i = 0; i < m; ++i) total_cells *= static_cast<double>(2 * box + 1);
    if (total_cells > 2e8) {
      throw resource_error("witness: cell enumeration too large at this scale", 0);
    }

    std::vector<Cell> cells;
    Cell c(m, -box);
    Vector point(m);
    while (true) {
      for (int i = 0; i < m; ++i) point(i) = static_cast<double>(c[i]);
      if ((p_long * point).norm() <= long_bound &&
          (p_short * point).norm() <= short_bound) {
        cells.push_back(c);
      }
      int axis = 0;
      for (; axis < m; ++axis) {
        if (c[axis] < box) {
          ++c[axis];
          break;
        }
        c[axis] = -box;
      }
      if (axis == m) break;
    }
    w.fns.push_back(LatticeFn::indicator(m, cells));
    w.cell_sets.push_back(std::move(cells));
  }

  double c0 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d.factors(); ++j) {
    c0 = std::min(c0, 1.0 / (2.0 * operator_norm(d.map(j))));
  }
  w.c0 = c0;
  w.slab = SlabSpec{v, c0, c0 * R, c0};
  return w;
}

}  // namespace blr
