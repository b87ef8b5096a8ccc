#pragma once

#include <utility>
#include <vector>

#include "lpp/field.hpp"
#include "lpp/lattice.hpp"

// Forward and backward last-passage dynamic programming, geodesic tracing,
// increment extraction, and a brute-force oracle for small fields.

namespace lpp {

enum class Orientation { ForwardFromBase, BackwardToTarget };

// Last-passage values on a rectangle. Entries are addressed by the original
// lattice point for both orientations.
struct PassageTable {
  LatticeRect rect;
  LatticePoint anchor;
  Orientation orientation = Orientation::ForwardFromBase;
  std::vector<double> g;

  std::int64_t index(LatticePoint p) const {
    return (p.x2 - rect.lo.x2) * rect.width() + (p.x1 - rect.lo.x1);
  }
  double at(LatticePoint p) const { return g[static_cast<std::size_t>(index(p))]; }
};

// Vertex list; consecutive entries differ by exactly one unit step.
struct GeodesicPath {
  std::vector<LatticePoint> vertices;
};

// G-differences G(a) - G(a - e1) (horizontal) or G(b) - G(b - e2) (vertical),
// defined where the shifted point stays inside the source table.
struct IncrementField {
  LatticeRect rect;
  bool horizontal = true;
  std::vector<double> v;

  std::int64_t index(LatticePoint p) const {
    return (p.x2 - rect.lo.x2) * rect.width() + (p.x1 - rect.lo.x1);
  }
  double at(LatticePoint p) const { return v[static_cast<std::size_t>(index(p))]; }
};

// Raw kernels on row-major nx-by-ny arrays:
//   g(0,0) = w(0,0); first row and column are prefix sums;
//   interior g = w + max(west, south).
// The blocked variant runs tiles along anti-diagonals in parallel; its
// per-cell update is identical to the serial kernel, so outputs match bitwise.
void fill_forward(const double* w, std::int64_t nx, std::int64_t ny, double* g);
void fill_forward_blocked(const double* w, std::int64_t nx, std::int64_t ny,
                          double* g, std::int64_t block = 256);

// Kernel dispatch used by all table builders: blocked when a thread team is
// available and the table is large, serial otherwise.
void run_fill_kernel(const double* w, std::int64_t nx, std::int64_t ny, double* g);

PassageTable lpp_forward(const WeightField& weights, LatticePoint base);
PassageTable lpp_backward(const WeightField& weights, LatticePoint target);

// Follows the successor with the larger table value (e1 on exact ties),
// clipped where only one step stays in the rectangle; ends at the anchor.
GeodesicPath trace_geodesic(const PassageTable& table, LatticePoint start);

// Exhaustive maximum over all up-right paths from x to y; |y-x|_1 <= 22.
std::pair<double, GeodesicPath> brute_force_lpp(const WeightField& weights,
                                                LatticePoint x, LatticePoint y);

IncrementField increments(const PassageTable& table, bool horizontal);

// Weight sum along a path accumulated from the last vertex backwards; matches
// the accumulation order of a BackwardToTarget table at path.front().
double path_sum_from_end(const WeightField& weights, const GeodesicPath& path);

// Accumulated from the first vertex; matches a ForwardFromBase table at
// path.back().
double path_sum_from_start(const WeightField& weights, const GeodesicPath& path);

// Increment recursion from a base: on the base row/column the increment is the
// weight itself, in the bulk
//   I(y) = w(y) + max(I(y - e2) - J(y - e1), 0)
//   J(y) = w(y) + max(J(y - e1) - I(y - e2), 0).
// Equals the table differences in real arithmetic, and coupled fields that
// agree in real arithmetic agree bitwise, which table differencing does not
// guarantee.
struct IncrementPair {
  IncrementField I;
  IncrementField J;
};
IncrementPair increment_recursion(const WeightField& weights, LatticePoint base);

}  // namespace lpp
