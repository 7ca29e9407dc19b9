#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "blr/datum.hpp"
#include "blr/matrix.hpp"
#include "blr/subspace.hpp"

namespace blr {

using Cell = std::vector<std::int64_t>;

// A nonnegative function on R^m constant on each unit-lattice cell
// v + [0,1)^m, stored sparsely over its support.
class LatticeFn {
 public:
  explicit LatticeFn(int m);

  static LatticeFn indicator(int m, const std::vector<Cell>& cells);

  int dim() const { return m_; }

  // Stores a finite value >= 0; zero erases the cell.
  void set(const Cell& v, double value);

  double cell_value(const Cell& v) const;

  // Value at the cell floor(x), componentwise; 0 off the support.
  double eval(const Vector& x) const;

  // Sum of cell values; each cell has unit volume.
  double integral() const;

  const std::map<Cell, double>& cells() const { return cells_; }

 private:
  int m_;
  std::map<Cell, double> cells_;
};

// sum over window origins v of the largest cell value among cells meeting
// v + [0,A)^m, with v ranging over all of Z^m.
double norm_window(const LatticeFn& f, double a);

// Same sum restricted to an explicit set of window origins.
double norm_window(const LatticeFn& f, double a, const std::vector<Cell>& lattice);

// The slab around V whose every point lands inside all the witness supports:
// |P_V x| <= c0 * R and |P_{V perp} x| <= c0.
struct SlabSpec {
  Subspace v = Subspace::trivial(0);
  double c0 = 0.0;
  double long_radius = 0.0;   // c0 * R
  double short_radius = 0.0;  // c0
};

// The extremizing input tuple for a subspace V at scale R: integer cells
// close to pi_j(V) in the long directions and to the origin transversally,
// their indicator functions, and the slab certificate.
struct WitnessSet {
  Subspace v = Subspace::trivial(0);
  double R = 0.0;
  std::vector<std::vector<Cell>> cell_sets;
  std::vector<LatticeFn> fns;
  double c0 = 0.0;
  SlabSpec slab;
};

// Exact integer enumeration of the witness cells:
//   S_j = { v in Z^{n_j} : |P_{pi_j(V)} v| <= R + sqrt(n),
//                          |P_{pi_j(V) perp} v| <= 1 + sqrt(n) }.
WitnessSet witness(const BLDatum& d, const Subspace& v, double R);

}  // namespace blr
