#pragma once

#include <cstdint>
#include <vector>

#include "lpp/passage.hpp"

// Increment-stationary last-passage processes with boundary weights on two
// axes, exit-time computation for one or all endpoints, nested-process
// coupling, and the exact combinatorial checks built on them.

namespace lpp {

struct BoundarySpec {
  enum class Side { SouthWest, NorthEast };

  double rho = 0.5;
  LatticePoint base;
  Side side = Side::SouthWest;
  std::vector<double> I;  // horizontal boundary weights, outward from base
  std::vector<double> J;  // vertical boundary weights, outward from base
};

struct CharacteristicTarget {
  double rho = 0.5;
  std::int64_t N = 0;
  LatticePoint point;
};

// (floor(N (1-rho)^2), floor(N rho^2)).
CharacteristicTarget characteristic_point(double rho, std::int64_t N);

// I ~ Exp(1-rho), J ~ Exp(rho); J is drawn after I from the same stream.
BoundarySpec make_sw_boundary(double rho, LatticePoint base, std::int64_t extent_x,
                              std::int64_t extent_y, RngStream& stream);

// Augmented-field forward pass: weight 0 at the base, I on the e1-axis, J on
// the e2-axis, bulk weights strictly inside. bulk.rect.lo must be base+(1,1).
PassageTable stationary_forward(const BoundarySpec& boundary,
                                const WeightField& bulk);

// Reflected variant anchored at the north-east corner boundary.base: values
// G(y) for y <= corner, with I[k-1] placed at corner - k*e1 and J[l-1] at
// corner - l*e2. bulk.rect.hi must be corner-(1,1).
PassageTable make_ne_process(const BoundarySpec& boundary, const WeightField& bulk);

// Signed index where the maximizing path leaves the boundary axes: +k for the
// e1-axis at base + k*e1, -l for the e2-axis. Endpoints on an axis return
// their own signed coordinate; the base returns 0. Predecessor ties resolve
// west, matching exit_labels_all.
std::int64_t exit_time(const PassageTable& table, LatticePoint endpoint);

struct ExitLabels {
  LatticeRect rect;
  std::vector<std::int64_t> label;

  std::int64_t at(LatticePoint p) const {
    return label[static_cast<std::size_t>((p.x2 - rect.lo.x2) * rect.width() +
                                          (p.x1 - rect.lo.x1))];
  }
};

// One sweep of predecessor-label propagation; label(z) equals exit_time(z)
// for every z in the table.
ExitLabels exit_labels_all(const PassageTable& table);

// Fresh SouthWest boundary at z read off as increments of the outer table
// along the row and column through z.
BoundarySpec nested_boundary_from_increments(const PassageTable& outer,
                                             LatticePoint z, double rho);

// True iff the outer geodesic to y and the nested process geodesic from z
// agree on every vertex strictly inside z + Z^2_{>0}. Exact per realization.
bool check_nested_geodesic_agreement(const PassageTable& outer,
                                     const WeightField& bulk, double rho,
                                     LatticePoint z, LatticePoint y);

// True iff (Z^{(0,0)->z} <= m) == (Z^{(m,-n)->z} < -n) for nested processes
// built from the outer table's increments at bases (0,0) and (m,-n).
bool check_exit_equivalence(const PassageTable& outer, const WeightField& bulk,
                            double rho, std::int64_t m, std::int64_t n,
                            LatticePoint z);

// Per-edge increments of the table along a path with steps in {e1, -e2}.
struct DownRightSample {
  std::vector<double> horizontal;
  std::vector<double> vertical;
};
DownRightSample down_right_increment_sample(const PassageTable& table,
                                            const std::vector<LatticePoint>& path);

}  // namespace lpp
