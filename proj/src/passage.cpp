#include "lpp/passage.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lpp {

void fill_forward(const double* w, std::int64_t nx, std::int64_t ny, double* g) {
  g[0] = w[0];
  for (std::int64_t i = 1; i < nx; ++i) g[i] = g[i - 1] + w[i];
  for (std::int64_t j = 1; j < ny; ++j) {
    const double* wr = w + j * nx;
    double* gr = g + j * nx;
    const double* gs = gr - nx;
    gr[0] = gs[0] + wr[0];
    for (std::int64_t i = 1; i < nx; ++i)
      gr[i] = wr[i] + std::max(gr[i - 1], gs[i]);
  }
}

void fill_forward_blocked(const double* w, std::int64_t nx, std::int64_t ny,
                          double* g, std::int64_t block) {
  const std::int64_t bs = block > 0 ? block : 256;
  const std::int64_t nbx = (nx + bs - 1) / bs;
  const std::int64_t nby = (ny + bs - 1) / bs;
  for (std::int64_t d = 0; d < nbx + nby - 1; ++d) {
    const std::int64_t j_lo = std::max<std::int64_t>(0, d - nbx + 1);
    const std::int64_t j_hi = std::min(d, nby - 1);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t bj = j_lo; bj <= j_hi; ++bj) {
      const std::int64_t bi = d - bj;
      const std::int64_t i0 = bi * bs, i1 = std::min(nx, i0 + bs);
      const std::int64_t j0 = bj * bs, j1 = std::min(ny, j0 + bs);
      for (std::int64_t j = j0; j < j1; ++j) {
        const double* wr = w + j * nx;
        double* gr = g + j * nx;
        const double* gs = gr - nx;
        for (std::int64_t i = i0; i < i1; ++i) {
          if (j == 0)
            gr[i] = (i == 0) ? wr[i] : gr[i - 1] + wr[i];
          else if (i == 0)
            gr[i] = gs[i] + wr[i];
          else
            gr[i] = wr[i] + std::max(gr[i - 1], gs[i]);
        }
      }
    }
  }
}

void run_fill_kernel(const double* w, std::int64_t nx, std::int64_t ny, double* g) {
#ifdef _OPENMP
  if (!omp_in_parallel() && omp_get_max_threads() > 1 && nx * ny >= (1 << 16)) {
    fill_forward_blocked(w, nx, ny, g);
    return;
  }
#endif
  fill_forward(w, nx, ny, g);
}

PassageTable lpp_forward(const WeightField& weights, LatticePoint base) {
  require(base == weights.rect.lo, "lpp_forward: base must equal weights.rect.lo");
  PassageTable t{weights.rect, base, Orientation::ForwardFromBase, {}};
  t.g.resize(static_cast<std::size_t>(weights.rect.area()));
  run_fill_kernel(weights.w.data(), weights.rect.width(), weights.rect.height(),
                  t.g.data());
  return t;
}

PassageTable lpp_backward(const WeightField& weights, LatticePoint target) {
  require(target == weights.rect.hi,
          "lpp_backward: target must equal weights.rect.hi");
  const std::int64_t nx = weights.rect.width();
  const std::int64_t ny = weights.rect.height();
  std::vector<double> wr(static_cast<std::size_t>(nx * ny));
  for (std::int64_t j = 0; j < ny; ++j)
    for (std::int64_t i = 0; i < nx; ++i)
      wr[static_cast<std::size_t>(j * nx + i)] =
          weights.w[static_cast<std::size_t>((ny - 1 - j) * nx + (nx - 1 - i))];
  std::vector<double> gr(wr.size());
  run_fill_kernel(wr.data(), nx, ny, gr.data());
  PassageTable t{weights.rect, target, Orientation::BackwardToTarget, {}};
  t.g.resize(wr.size());
  for (std::int64_t j = 0; j < ny; ++j)
    for (std::int64_t i = 0; i < nx; ++i)
      t.g[static_cast<std::size_t>(j * nx + i)] =
          gr[static_cast<std::size_t>((ny - 1 - j) * nx + (nx - 1 - i))];
  return t;
}

GeodesicPath trace_geodesic(const PassageTable& table, LatticePoint start) {
  require(table.orientation == Orientation::BackwardToTarget,
          "trace_geodesic: table must be BackwardToTarget");
  require(table.rect.contains(start), "trace_geodesic: start outside table rect");
  GeodesicPath path;
  LatticePoint v = start;
  path.vertices.push_back(v);
  while (v != table.anchor) {
    const bool can_e1 = v.x1 < table.rect.hi.x1;
    const bool can_e2 = v.x2 < table.rect.hi.x2;
    LatticePoint next;
    if (can_e1 && can_e2)
      next = table.at(v + e1) >= table.at(v + e2) ? v + e1 : v + e2;
    else
      next = can_e1 ? v + e1 : v + e2;
    v = next;
    path.vertices.push_back(v);
  }
  return path;
}

namespace {

void brute_force_visit(const WeightField& w, LatticePoint p, LatticePoint y,
                       double running, std::vector<LatticePoint>& cur,
                       double& best, std::vector<LatticePoint>& best_path) {
  if (p == y) {
    if (running > best) {
      best = running;
      best_path = cur;
    }
    return;
  }
  if (p.x1 < y.x1) {
    cur.push_back(p + e1);
    brute_force_visit(w, p + e1, y, running + w.at(p + e1), cur, best, best_path);
    cur.pop_back();
  }
  if (p.x2 < y.x2) {
    cur.push_back(p + e2);
    brute_force_visit(w, p + e2, y, running + w.at(p + e2), cur, best, best_path);
    cur.pop_back();
  }
}

}  // namespace

std::pair<double, GeodesicPath> brute_force_lpp(const WeightField& weights,
                                                LatticePoint x, LatticePoint y) {
  require(weights.rect.contains(x) && weights.rect.contains(y) && leq(x, y),
          "brute_force_lpp: need x <= y inside the field");
  if ((y.x1 - x.x1) + (y.x2 - x.x2) > 22)
    throw CapacityError("brute_force_lpp: |y-x|_1 above the path count cap");
  std::vector<LatticePoint> cur{x};
  std::vector<LatticePoint> best_path;
  double best = -1.0;
  brute_force_visit(weights, x, y, weights.at(x), cur, best, best_path);
  return {best, GeodesicPath{std::move(best_path)}};
}

IncrementField increments(const PassageTable& table, bool horizontal) {
  require(table.orientation == Orientation::ForwardFromBase,
          "increments: table must be ForwardFromBase");
  const LatticePoint shift = horizontal ? e1 : e2;
  require(horizontal ? table.rect.width() >= 2 : table.rect.height() >= 2,
          "increments: table too thin in the requested direction");
  IncrementField f{{table.rect.lo + shift, table.rect.hi}, horizontal, {}};
  f.v.resize(static_cast<std::size_t>(f.rect.area()));
  for (std::int64_t j = 0; j < f.rect.height(); ++j)
    for (std::int64_t i = 0; i < f.rect.width(); ++i) {
      LatticePoint p{f.rect.lo.x1 + i, f.rect.lo.x2 + j};
      f.v[static_cast<std::size_t>(j * f.rect.width() + i)] =
          table.at(p) - table.at(p - shift);
    }
  return f;
}

double path_sum_from_end(const WeightField& weights, const GeodesicPath& path) {
  double acc = 0.0;
  for (auto it = path.vertices.rbegin(); it != path.vertices.rend(); ++it)
    acc = weights.at(*it) + acc;
  return acc;
}

double path_sum_from_start(const WeightField& weights, const GeodesicPath& path) {
  double acc = 0.0;
  for (const auto& v : path.vertices) acc += weights.at(v);
  return acc;
}

IncrementPair increment_recursion(const WeightField& weights, LatticePoint base) {
  require(base == weights.rect.lo,
          "increment_recursion: base must equal weights.rect.lo");
  require(weights.rect.width() >= 2 && weights.rect.height() >= 2,
          "increment_recursion: field must be at least 2x2");
  IncrementField I{{base + e1, weights.rect.hi}, true, {}};
  IncrementField J{{base + e2, weights.rect.hi}, false, {}};
  I.v.resize(static_cast<std::size_t>(I.rect.area()));
  J.v.resize(static_cast<std::size_t>(J.rect.area()));
  const std::int64_t nx = weights.rect.width();
  const std::int64_t ny = weights.rect.height();
  // Row above the base row seeds J; column right of the base column seeds I.
  for (std::int64_t i = 1; i < nx; ++i) {
    LatticePoint p{base.x1 + i, base.x2};
    I.v[static_cast<std::size_t>(I.index(p))] = weights.at(p);
  }
  for (std::int64_t j = 1; j < ny; ++j) {
    LatticePoint p{base.x1, base.x2 + j};
    J.v[static_cast<std::size_t>(J.index(p))] = weights.at(p);
  }
  for (std::int64_t j = 1; j < ny; ++j)
    for (std::int64_t i = 1; i < nx; ++i) {
      LatticePoint p{base.x1 + i, base.x2 + j};
      const double gap = I.at(p - e2) - J.at(p - e1);
      I.v[static_cast<std::size_t>(I.index(p))] =
          weights.at(p) + std::max(gap, 0.0);
      J.v[static_cast<std::size_t>(J.index(p))] =
          weights.at(p) + std::max(-gap, 0.0);
    }
  return IncrementPair{std::move(I), std::move(J)};
}

}  // namespace lpp
