#include "lpp/busemann.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <unordered_set>
#include <utility>

namespace lpp {

std::uint64_t ulp_distance(double a, double b) {
  auto key = [](double x) {
    std::uint64_t u = std::bit_cast<std::uint64_t>(x);
    const std::uint64_t sign = std::uint64_t{1} << 63;
    return (u & sign) ? sign - u : u + sign;
  };
  const std::uint64_t ka = key(a), kb = key(b);
  return ka >= kb ? ka - kb : kb - ka;
}

BusemannWindow busemann_window(WeightField bulk, double rho, LatticeRect window) {
  require(rho > 0.0 && rho < 1.0, "busemann_window: rho in (0,1)");
  require(leq(window.lo, window.hi), "busemann_window: window.lo must be <= window.hi");
  require(leq(bulk.rect.lo, window.lo),
          "busemann_window: window must start inside the bulk field");
  const LatticePoint far = bulk.rect.hi;
  require(leq(window.hi + e1 + e2, far),
          "busemann_window: window must stay clear of the far target");
  if (bulk.rect.lo != window.lo) bulk = restrict_field(bulk, {window.lo, far});
  BusemannWindow bw{rho, window, far, {}, {}};
  bw.back = lpp_backward(bulk, far);
  bw.bulk = std::move(bulk);
  return bw;
}

GeodesicPath semi_infinite_geodesic(const BusemannWindow& bw, LatticePoint start) {
  require(bw.window.contains(start), "semi_infinite_geodesic: start outside window");
  GeodesicPath p;
  LatticePoint x = start;
  p.vertices.push_back(x);
  while (bw.window.contains(x)) {
    x = bw.primal_step_is_e1(x) ? x + e1 : x + e2;
    p.vertices.push_back(x);
  }
  return p;
}

CoalescenceResult coalescence_point(const BusemannWindow& bw, LatticePoint x,
                                    LatticePoint y, const LatticeRect* query) {
  GeodesicPath a = semi_infinite_geodesic(bw, x);
  std::unordered_set<std::int64_t> on_a;
  on_a.reserve(a.vertices.size() * 2);
  for (auto v : a.vertices) on_a.insert(pack_point(v));
  GeodesicPath b = semi_infinite_geodesic(bw, y);
  CoalescenceResult r;
  for (auto v : b.vertices) {
    if (on_a.count(pack_point(v))) {
      r.found = true;
      r.point = v;
      break;
    }
  }
  r.inside_rect = r.found && query != nullptr && query->contains(r.point);
  return r;
}

DualField dual_field(const BusemannWindow& bw) {
  DualField d{{bw.window.lo + e1 + e2, bw.window.hi + e1 + e2}, {}};
  d.v.resize(static_cast<std::size_t>(d.rect.area()));
  std::size_t k = 0;
  for (std::int64_t j = d.rect.lo.x2; j <= d.rect.hi.x2; ++j)
    for (std::int64_t i = d.rect.lo.x1; i <= d.rect.hi.x1; ++i)
      d.v[k++] = bw.dual_weight({i, j});
  return d;
}

GeodesicPath dual_geodesic(const BusemannWindow& bw, LatticePoint start) {
  const LatticeRect drect{bw.window.lo + e1 + e2, bw.window.hi + e1 + e2};
  require(drect.contains(start), "dual_geodesic: start outside the dual window");
  GeodesicPath p;
  LatticePoint y = start;
  p.vertices.push_back(y);
  while (drect.contains(y)) {
    y = bw.dual_step_is_minus_e1(y) ? y - e1 : y - e2;
    p.vertices.push_back(y);
  }
  return p;
}

bool check_additivity(const BusemannWindow& bw, int max_ulps) {
  for (std::int64_t j = bw.window.lo.x2; j < bw.window.hi.x2; ++j)
    for (std::int64_t i = bw.window.lo.x1; i < bw.window.hi.x1; ++i) {
      const LatticePoint x{i, j};
      const double lhs = bw.edge_h(x) + bw.edge_v(x + e1);
      const double rhs = bw.edge_v(x) + bw.edge_h(x + e2);
      if (ulp_distance(lhs, rhs) > static_cast<std::uint64_t>(max_ulps)) return false;
    }
  return true;
}

bool check_step_duality(const BusemannWindow& bw) {
  for (std::int64_t j = bw.window.lo.x2; j <= bw.window.hi.x2; ++j)
    for (std::int64_t i = bw.window.lo.x1; i <= bw.window.hi.x1; ++i) {
      const LatticePoint x{i, j};
      if (bw.primal_step_is_e1(x) != bw.dual_step_is_minus_e1(x + e1 + e2))
        return false;
    }
  return true;
}

DualityEvents check_duality_events(const BusemannWindow& bw, LatticePoint v,
                                   std::int64_t s) {
  require(bw.window.lo == LatticePoint{0, 0},
          "check_duality_events: window must start at the origin");
  require(v.x1 >= 1 && v.x2 >= 1, "check_duality_events: v must be >= (1,1)");
  require(leq(v + e1 + e2, bw.window.hi),
          "check_duality_events: window too small for v");
  require(s >= 0 && s <= std::min(v.x1, v.x2),
          "check_duality_events: separation must lie in [0, min(v)]");

  DualityEvents ev;
  const LatticeRect box{{0, 0}, v};
  CoalescenceResult c =
      coalescence_point(bw, LatticePoint{s, 0}, LatticePoint{0, s}, &box);
  ev.primal_event = !c.inside_rect;

  // Reachability of the square [(1,1),(s,s)] under the dual step map, swept
  // over [(1,1), v+(1,1)] in increasing row-major order so both possible
  // successors are already resolved. Vertices south or west of the sweep can
  // never re-enter it.
  const std::int64_t nx = v.x1 + 1, ny = v.x2 + 1;
  std::vector<std::uint8_t> enters(static_cast<std::size_t>(nx * ny), 0);
  auto idx = [nx](std::int64_t i, std::int64_t j) {
    return static_cast<std::size_t>((j - 1) * nx + (i - 1));
  };
  for (std::int64_t j = 1; j <= ny; ++j)
    for (std::int64_t i = 1; i <= nx; ++i) {
      const LatticePoint y{i, j};
      if (i <= s && j <= s) {
        enters[idx(i, j)] = 1;
        continue;
      }
      const LatticePoint t = bw.dual_step_is_minus_e1(y) ? y - e1 : y - e2;
      enters[idx(i, j)] = (t.x1 >= 1 && t.x2 >= 1) ? enters[idx(t.x1, t.x2)] : 0;
    }
  bool hit = false;
  for (std::int64_t j = 1; j <= ny && !hit; ++j) hit = enters[idx(nx, j)] != 0;
  for (std::int64_t i = 1; i <= v.x1 && !hit; ++i) hit = enters[idx(i, ny)] != 0;
  ev.dual_event = hit;
  return ev;
}

bool check_busemann_consistency(const BusemannWindow& bw, LatticePoint base,
                                std::int64_t extent, double* max_scaled_err) {
  require(extent >= 1, "check_busemann_consistency: extent >= 1");
  const LatticePoint span{extent, extent};
  require(leq(bw.window.lo, base - span) && leq(base + span, bw.window.hi),
          "check_busemann_consistency: extent does not fit around base");

  double worst = 0.0;
  auto within = [&worst](double got, double want) {
    const double scale = std::max(1.0, std::fabs(want));
    const double err = std::fabs(got - want) / scale;
    worst = std::max(worst, err);
    return err <= 1e-9;
  };
  bool ok = true;

  // South-west process over the dual weights reproduces B(base, y) for
  // y >= base.
  {
    BoundarySpec b;
    b.rho = bw.rho;
    b.base = base;
    b.side = BoundarySpec::Side::SouthWest;
    for (std::int64_t k = 1; k <= extent; ++k)
      b.I.push_back(bw.edge_h(base + LatticePoint{k - 1, 0}));
    for (std::int64_t l = 1; l <= extent; ++l)
      b.J.push_back(bw.edge_v(base + LatticePoint{0, l - 1}));
    WeightField dual{{base + e1 + e2, base + span}, {}};
    dual.w.resize(static_cast<std::size_t>(dual.rect.area()));
    std::size_t k = 0;
    for (std::int64_t j = dual.rect.lo.x2; j <= dual.rect.hi.x2; ++j)
      for (std::int64_t i = dual.rect.lo.x1; i <= dual.rect.hi.x1; ++i)
        dual.w[k++] = bw.dual_weight({i, j});
    PassageTable sw = stationary_forward(b, dual);
    for (std::int64_t j = sw.rect.lo.x2; j <= sw.rect.hi.x2; ++j)
      for (std::int64_t i = sw.rect.lo.x1; i <= sw.rect.hi.x1; ++i) {
        const LatticePoint y{i, j};
        ok = within(sw.at(y), bw.busemann(base, y)) && ok;
      }
  }

  // North-east process over the original weights reproduces B(y, base) for
  // y <= base.
  {
    BoundarySpec b;
    b.rho = bw.rho;
    b.base = base;
    b.side = BoundarySpec::Side::NorthEast;
    for (std::int64_t k = 1; k <= extent; ++k)
      b.I.push_back(bw.busemann(base - LatticePoint{k, 0}, base - LatticePoint{k - 1, 0}));
    for (std::int64_t l = 1; l <= extent; ++l)
      b.J.push_back(bw.busemann(base - LatticePoint{0, l}, base - LatticePoint{0, l - 1}));
    WeightField w = restrict_field(bw.bulk, {base - span, base - e1 - e2});
    PassageTable ne = make_ne_process(b, w);
    for (std::int64_t j = ne.rect.lo.x2; j <= ne.rect.hi.x2; ++j)
      for (std::int64_t i = ne.rect.lo.x1; i <= ne.rect.hi.x1; ++i) {
        const LatticePoint y{i, j};
        ok = within(ne.at(y), bw.busemann(y, base)) && ok;
      }
  }

  if (max_scaled_err != nullptr) *max_scaled_err = worst;
  return ok;
}

bool check_dual_restriction(const BusemannWindow& bw, LatticePoint w) {
  require(bw.window.lo == LatticePoint{0, 0},
          "check_dual_restriction: window must start at the origin");
  const LatticeRect drect{e1 + e2, bw.window.hi + e1 + e2};
  require(drect.contains(w), "check_dual_restriction: w outside the dual window");

  GeodesicPath dual = dual_geodesic(bw, w);

  BoundarySpec b;
  b.rho = bw.rho;
  b.base = LatticePoint{0, 0};
  b.side = BoundarySpec::Side::SouthWest;
  for (std::int64_t k = 1; k <= w.x1; ++k)
    b.I.push_back(bw.edge_h({k - 1, 0}));
  for (std::int64_t l = 1; l <= w.x2; ++l)
    b.J.push_back(bw.edge_v({0, l - 1}));
  WeightField duals{{e1 + e2, w}, {}};
  duals.w.resize(static_cast<std::size_t>(duals.rect.area()));
  std::size_t k = 0;
  for (std::int64_t j = 1; j <= w.x2; ++j)
    for (std::int64_t i = 1; i <= w.x1; ++i) duals.w[k++] = bw.dual_weight({i, j});
  PassageTable t = stationary_forward(b, duals);

  std::set<std::pair<std::int64_t, std::int64_t>> edges;
  LatticePoint z = w;
  while (z != t.anchor) {
    LatticePoint pred;
    if (z.x2 == 0)
      pred = z - e1;
    else if (z.x1 == 0)
      pred = z - e2;
    else
      pred = t.at(z - e1) >= t.at(z - e2) ? z - e1 : z - e2;
    edges.emplace(pack_point(z), pack_point(pred));
    z = pred;
  }

  for (std::size_t i = 0; i + 1 < dual.vertices.size(); ++i) {
    if (!edges.count({pack_point(dual.vertices[i]), pack_point(dual.vertices[i + 1])}))
      return false;
  }
  return true;
}

double stabilization_fraction(const BusemannWindow& a, const BusemannWindow& b) {
  require(a.window == b.window,
          "stabilization_fraction: windows must cover the same rectangle");
  std::int64_t differ = 0;
  for (std::int64_t j = a.window.lo.x2; j <= a.window.hi.x2; ++j)
    for (std::int64_t i = a.window.lo.x1; i <= a.window.hi.x1; ++i) {
      const LatticePoint x{i, j};
      if (a.primal_step_is_e1(x) != b.primal_step_is_e1(x)) ++differ;
    }
  return static_cast<double>(differ) / static_cast<double>(a.window.area());
}

}  // namespace lpp
