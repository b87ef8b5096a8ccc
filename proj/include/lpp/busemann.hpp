#pragma once

#include <cstdint>
#include <vector>

#include "lpp/stationary.hpp"

// Finite-horizon Busemann functions from one backward table, the geodesics
// and coalescence points they induce, dual weights and dual geodesics on the
// shifted lattice, and the exact duality checks relating them.
//
// Dual lattice convention: the dual vertex z = y - (1/2, 1/2) is addressed
// everywhere by its north-east primal neighbour y, so dual paths are integer
// paths with steps in {-e1, -e2}.

namespace lpp {

// B(x, y) = G(x, far_target) - G(y, far_target), both read from one
// BackwardToTarget table over [window.lo, far_target]. The bulk weights are
// kept for checks that rebuild stationary processes around a base point.
struct BusemannWindow {
  double rho = 0.5;
  LatticeRect window;
  LatticePoint far_target;
  PassageTable back;
  WeightField bulk;

  double busemann(LatticePoint x, LatticePoint y) const {
    return back.at(x) - back.at(y);
  }
  // B(x, x+e1) and B(x, x+e2); positive for every x in the window.
  double edge_h(LatticePoint x) const { return back.at(x) - back.at(x + e1); }
  double edge_v(LatticePoint x) const { return back.at(x) - back.at(x + e2); }

  // Step rule B(x, x+e1) <= B(x, x+e2), reduced to the raw table comparison
  // so that every consumer resolves ties identically (e1 on ties).
  bool primal_step_is_e1(LatticePoint x) const {
    return back.at(x + e1) >= back.at(x + e2);
  }
  // Step rule B(y-e1, y) <= B(y-e2, y) at the dual vertex addressed by y
  // (-e1 on ties).
  bool dual_step_is_minus_e1(LatticePoint y) const {
    return back.at(y - e1) <= back.at(y - e2);
  }
  // min(B(y-e1, y), B(y-e2, y)); the min commutes with the common subtraction,
  // so this is exact, not a rounded min of two rounded edges.
  double dual_weight(LatticePoint y) const {
    double a = back.at(y - e1), b = back.at(y - e2);
    return (a < b ? a : b) - back.at(y);
  }
};

// Builds the backward table to bulk.rect.hi over [window.lo, bulk.rect.hi].
// Requires window.hi + (1,1) <= bulk.rect.hi so that every window edge and
// step decision stays clear of the truncation corner.
BusemannWindow busemann_window(WeightField bulk, double rho, LatticeRect window);

// Up-right path from start following primal_step_is_e1; the last vertex is
// the first one outside the window.
GeodesicPath semi_infinite_geodesic(const BusemannWindow& bw, LatticePoint start);

struct CoalescenceResult {
  bool found = false;        // false: paths left the window unmerged
  LatticePoint point;        // valid when found
  bool inside_rect = false;  // found && query rectangle contains point
};

// First common vertex of the two traced paths. The step rule is a
// deterministic successor map, so the paths agree from that vertex on.
CoalescenceResult coalescence_point(const BusemannWindow& bw, LatticePoint x,
                                    LatticePoint y,
                                    const LatticeRect* query = nullptr);

// Dual weights on [window.lo + (1,1), window.hi + (1,1)] in the addressing
// convention above.
struct DualField {
  LatticeRect rect;
  std::vector<double> v;

  double at(LatticePoint y) const {
    return v[static_cast<std::size_t>((y.x2 - rect.lo.x2) * rect.width() +
                                      (y.x1 - rect.lo.x1))];
  }
};
DualField dual_field(const BusemannWindow& bw);

// Down-left path from the dual vertex addressed by start, following
// dual_step_is_minus_e1; the last vertex is the first one outside
// [window.lo + (1,1), window.hi + (1,1)].
GeodesicPath dual_geodesic(const BusemannWindow& bw, LatticePoint start);

// B(x,x+e1) + B(x+e1,x+(1,1)) == B(x,x+e2) + B(x+e2,x+(1,1)) on every unit
// square with x and x+(1,1) in the window, within max_ulps.
bool check_additivity(const BusemannWindow& bw, int max_ulps = 4);

// primal_step_is_e1(x) == dual_step_is_minus_e1(x+(1,1)) for every window x;
// equivalent to primal and dual paths never crossing an edge.
bool check_step_duality(const BusemannWindow& bw);

struct DualityEvents {
  bool primal_event = false;  // coalescence of the geodesics from (s,0) and
                              // (0,s) lies outside [0, v] (or outside the window)
  bool dual_event = false;    // some dual geodesic launched outside [0, v]
                              // reaches the square [(1,1), (s,s)]
};

// Requires window.lo == (0,0), v + (1,1) <= window.hi, 0 <= s <= min(v).
// The two events are built from the same table and agree in every
// realization.
DualityEvents check_duality_events(const BusemannWindow& bw, LatticePoint v,
                                   std::int64_t s);

// Rebuilds stationary processes from Busemann edge increments around base and
// compares their tables against Busemann differences over an extent-sized
// square on each side: north-east process with the original bulk weights
// against B(y, base), south-west process with the dual weights against
// B(base, y). Both identities are telescoping-exact in real arithmetic; the
// dynamic programs accumulate differently, so the comparison is at relative
// tolerance 1e-9. Reports the worst scaled error when max_scaled_err is set.
bool check_busemann_consistency(const BusemannWindow& bw, LatticePoint base,
                                std::int64_t extent,
                                double* max_scaled_err = nullptr);

// Stationary process on the dual lattice from the base addressed by (0,0):
// boundary increments edge_h((k-1,0)) and edge_v((0,l-1)), dual weights in
// the bulk. Its backtracked geodesic from w must contain every edge of the
// dual geodesic from w whose decision vertex is at (1,1) or beyond.
// Requires window.lo == (0,0) and w in [(1,1), window.hi + (1,1)].
bool check_dual_restriction(const BusemannWindow& bw, LatticePoint w);

// Fraction of window vertices whose primal step decision differs between two
// windows built over the same weights with different far targets.
double stabilization_fraction(const BusemannWindow& a, const BusemannWindow& b);

// Magnitude-ordered ULP distance between two positive finite doubles.
std::uint64_t ulp_distance(double a, double b);

}  // namespace lpp
