#pragma once

#include <vector>

#include "lpp/lattice.hpp"
#include "lpp/rng.hpp"

// Dense positive vertex weights on an inclusive rectangle.

namespace lpp {

struct WeightField {
  LatticeRect rect;
  std::vector<double> w;

  std::int64_t index(LatticePoint p) const {
    return (p.x2 - rect.lo.x2) * rect.width() + (p.x1 - rect.lo.x1);
  }
  double at(LatticePoint p) const { return w[static_cast<std::size_t>(index(p))]; }
  double& at(LatticePoint p) { return w[static_cast<std::size_t>(index(p))]; }
};

// i.i.d. Exp(1) weights; row-major fill order so replays are bit-identical.
inline WeightField generate_bulk(const LatticeRect& rect, RngStream& stream) {
  require(leq(rect.lo, rect.hi), "generate_bulk: rect.lo must be <= rect.hi");
  if (rect.area() > kMaxTableCells)
    throw CapacityError("generate_bulk: rect exceeds the table cell budget");
  WeightField f{rect, {}};
  f.w.resize(static_cast<std::size_t>(rect.area()));
  for (auto& v : f.w) v = stream.exponential(1.0);
  return f;
}

// Copy of the weights restricted to sub, which must lie inside field.rect.
inline WeightField restrict_field(const WeightField& field, const LatticeRect& sub) {
  require(field.rect.contains(sub.lo) && field.rect.contains(sub.hi),
          "restrict_field: sub-rectangle must lie inside the field");
  WeightField f{sub, {}};
  f.w.resize(static_cast<std::size_t>(sub.area()));
  for (std::int64_t j = 0; j < sub.height(); ++j)
    for (std::int64_t i = 0; i < sub.width(); ++i) {
      LatticePoint p{sub.lo.x1 + i, sub.lo.x2 + j};
      f.w[static_cast<std::size_t>(j * sub.width() + i)] = field.at(p);
    }
  return f;
}

}  // namespace lpp
