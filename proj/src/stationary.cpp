#include "lpp/stationary.hpp"

#include <algorithm>
#include <cmath>

namespace lpp {

CharacteristicTarget characteristic_point(double rho, std::int64_t N) {
  require(rho > 0.0 && rho < 1.0, "characteristic_point: rho in (0,1)");
  require(N >= 1, "characteristic_point: N >= 1");
  const double nd = static_cast<double>(N);
  LatticePoint p{tolerant_floor((1.0 - rho) * (1.0 - rho) * nd),
                 tolerant_floor(rho * rho * nd)};
  return CharacteristicTarget{rho, N, p};
}

BoundarySpec make_sw_boundary(double rho, LatticePoint base, std::int64_t extent_x,
                              std::int64_t extent_y, RngStream& stream) {
  require(rho > 0.0 && rho < 1.0, "make_sw_boundary: rho in (0,1)");
  require(extent_x >= 1 && extent_y >= 1, "make_sw_boundary: extents >= 1");
  BoundarySpec b;
  b.rho = rho;
  b.base = base;
  b.side = BoundarySpec::Side::SouthWest;
  b.I.resize(static_cast<std::size_t>(extent_x));
  for (auto& v : b.I) v = stream.exponential(1.0 - rho);
  b.J.resize(static_cast<std::size_t>(extent_y));
  for (auto& v : b.J) v = stream.exponential(rho);
  return b;
}

PassageTable stationary_forward(const BoundarySpec& boundary,
                                const WeightField& bulk) {
  require(boundary.side == BoundarySpec::Side::SouthWest,
          "stationary_forward: boundary side must be SouthWest");
  require(bulk.rect.lo == boundary.base + e1 + e2,
          "stationary_forward: bulk.rect.lo must be base+(1,1)");
  const std::int64_t ex = bulk.rect.hi.x1 - boundary.base.x1;
  const std::int64_t ey = bulk.rect.hi.x2 - boundary.base.x2;
  require(static_cast<std::int64_t>(boundary.I.size()) >= ex,
          "stationary_forward: I boundary shorter than the window");
  require(static_cast<std::int64_t>(boundary.J.size()) >= ey,
          "stationary_forward: J boundary shorter than the window");
  const std::int64_t nx = ex + 1, ny = ey + 1;
  if (nx * ny > kMaxTableCells)
    throw CapacityError("stationary_forward: window exceeds the table cell budget");
  std::vector<double> aug(static_cast<std::size_t>(nx * ny));
  aug[0] = 0.0;
  for (std::int64_t i = 1; i < nx; ++i) aug[static_cast<std::size_t>(i)] = boundary.I[static_cast<std::size_t>(i - 1)];
  for (std::int64_t j = 1; j < ny; ++j) {
    double* row = aug.data() + j * nx;
    row[0] = boundary.J[static_cast<std::size_t>(j - 1)];
    const double* wr = bulk.w.data() + (j - 1) * (nx - 1);
    for (std::int64_t i = 1; i < nx; ++i) row[i] = wr[i - 1];
  }
  PassageTable t{{boundary.base, bulk.rect.hi}, boundary.base,
                 Orientation::ForwardFromBase, {}};
  t.g.resize(aug.size());
  run_fill_kernel(aug.data(), nx, ny, t.g.data());
  return t;
}

PassageTable make_ne_process(const BoundarySpec& boundary, const WeightField& bulk) {
  require(boundary.side == BoundarySpec::Side::NorthEast,
          "make_ne_process: boundary side must be NorthEast");
  const LatticePoint corner = boundary.base;
  require(bulk.rect.hi == corner - e1 - e2,
          "make_ne_process: bulk.rect.hi must be corner-(1,1)");
  const std::int64_t ex = corner.x1 - bulk.rect.lo.x1;
  const std::int64_t ey = corner.x2 - bulk.rect.lo.x2;
  require(static_cast<std::int64_t>(boundary.I.size()) >= ex,
          "make_ne_process: I boundary shorter than the window");
  require(static_cast<std::int64_t>(boundary.J.size()) >= ey,
          "make_ne_process: J boundary shorter than the window");
  const std::int64_t nx = ex + 1, ny = ey + 1;
  if (nx * ny > kMaxTableCells)
    throw CapacityError("make_ne_process: window exceeds the table cell budget");
  // Reflected grid: cell (i,j) holds the weight of corner - (i,j).
  std::vector<double> aug(static_cast<std::size_t>(nx * ny));
  aug[0] = 0.0;
  for (std::int64_t i = 1; i < nx; ++i)
    aug[static_cast<std::size_t>(i)] = boundary.I[static_cast<std::size_t>(i - 1)];
  for (std::int64_t j = 1; j < ny; ++j) {
    double* row = aug.data() + j * nx;
    row[0] = boundary.J[static_cast<std::size_t>(j - 1)];
    for (std::int64_t i = 1; i < nx; ++i)
      row[i] = bulk.at({corner.x1 - i, corner.x2 - j});
  }
  std::vector<double> g(aug.size());
  run_fill_kernel(aug.data(), nx, ny, g.data());
  PassageTable t{{corner - LatticePoint{ex, ey}, corner}, corner,
                 Orientation::BackwardToTarget, {}};
  t.g.resize(g.size());
  for (std::int64_t j = 0; j < ny; ++j)
    for (std::int64_t i = 0; i < nx; ++i) {
      LatticePoint y{corner.x1 - i, corner.x2 - j};
      t.g[static_cast<std::size_t>(t.index(y))] =
          g[static_cast<std::size_t>(j * nx + i)];
    }
  return t;
}

std::int64_t exit_time(const PassageTable& table, LatticePoint endpoint) {
  require(table.orientation == Orientation::ForwardFromBase,
          "exit_time: table must come from stationary_forward");
  require(table.rect.contains(endpoint), "exit_time: endpoint outside the window");
  const LatticePoint base = table.anchor;
  LatticePoint z = endpoint;
  while (z.x1 > base.x1 && z.x2 > base.x2) {
    z = table.at(z - e1) >= table.at(z - e2) ? z - e1 : z - e2;
  }
  if (z == base) return 0;
  return z.x2 == base.x2 ? (z.x1 - base.x1) : -(z.x2 - base.x2);
}

ExitLabels exit_labels_all(const PassageTable& table) {
  require(table.orientation == Orientation::ForwardFromBase,
          "exit_labels_all: table must come from stationary_forward");
  const LatticePoint base = table.anchor;
  ExitLabels out{table.rect, {}};
  out.label.resize(static_cast<std::size_t>(table.rect.area()));
  const std::int64_t nx = table.rect.width(), ny = table.rect.height();
  auto lab = [&](std::int64_t i, std::int64_t j) -> std::int64_t& {
    return out.label[static_cast<std::size_t>(j * nx + i)];
  };
  lab(0, 0) = 0;
  for (std::int64_t i = 1; i < nx; ++i) lab(i, 0) = i;
  for (std::int64_t j = 1; j < ny; ++j) lab(0, j) = -j;
  for (std::int64_t j = 1; j < ny; ++j)
    for (std::int64_t i = 1; i < nx; ++i) {
      LatticePoint z{base.x1 + i, base.x2 + j};
      lab(i, j) = table.at(z - e1) >= table.at(z - e2) ? lab(i - 1, j) : lab(i, j - 1);
    }
  return out;
}

BoundarySpec nested_boundary_from_increments(const PassageTable& outer,
                                             LatticePoint z, double rho) {
  require(outer.orientation == Orientation::ForwardFromBase,
          "nested_boundary_from_increments: outer must come from stationary_forward");
  require(outer.rect.contains(z), "nested_boundary_from_increments: z outside window");
  require(z.x1 < outer.rect.hi.x1 && z.x2 < outer.rect.hi.x2,
          "nested_boundary_from_increments: z on the outer NE boundary");
  BoundarySpec b;
  b.rho = rho;
  b.base = z;
  b.side = BoundarySpec::Side::SouthWest;
  const std::int64_t ex = outer.rect.hi.x1 - z.x1;
  const std::int64_t ey = outer.rect.hi.x2 - z.x2;
  b.I.resize(static_cast<std::size_t>(ex));
  for (std::int64_t k = 1; k <= ex; ++k)
    b.I[static_cast<std::size_t>(k - 1)] =
        outer.at({z.x1 + k, z.x2}) - outer.at({z.x1 + k - 1, z.x2});
  b.J.resize(static_cast<std::size_t>(ey));
  for (std::int64_t l = 1; l <= ey; ++l)
    b.J[static_cast<std::size_t>(l - 1)] =
        outer.at({z.x1, z.x2 + l}) - outer.at({z.x1, z.x2 + l - 1});
  return b;
}

namespace {

// Backtrack the argmax predecessor chain from y to the table base; ties go
// west, matching exit_time and exit_labels_all.
std::vector<LatticePoint> backtrack_path(const PassageTable& table, LatticePoint y) {
  std::vector<LatticePoint> path{y};
  const LatticePoint base = table.anchor;
  LatticePoint z = y;
  while (z != base) {
    if (z.x2 == base.x2)
      z = z - e1;
    else if (z.x1 == base.x1)
      z = z - e2;
    else
      z = table.at(z - e1) >= table.at(z - e2) ? z - e1 : z - e2;
    path.push_back(z);
  }
  return path;
}

}  // namespace

bool check_nested_geodesic_agreement(const PassageTable& outer,
                                     const WeightField& bulk, double rho,
                                     LatticePoint z, LatticePoint y) {
  require(outer.rect.contains(y), "check_nested_geodesic_agreement: y outside window");
  require(z.x1 < y.x1 && z.x2 < y.x2,
          "check_nested_geodesic_agreement: y must lie in z + Z^2_{>0}");
  BoundarySpec nested_b = nested_boundary_from_increments(outer, z, rho);
  WeightField nested_bulk = restrict_field(bulk, {z + e1 + e2, y});
  nested_b.I.resize(static_cast<std::size_t>(y.x1 - z.x1));
  nested_b.J.resize(static_cast<std::size_t>(y.x2 - z.x2));
  PassageTable nested = stationary_forward(nested_b, nested_bulk);

  auto outer_path = backtrack_path(outer, y);
  auto nested_path = backtrack_path(nested, y);
  auto strictly_inside = [&](LatticePoint p) {
    return p.x1 > z.x1 && p.x2 > z.x2;
  };
  std::vector<LatticePoint> a, b;
  for (auto p : outer_path)
    if (strictly_inside(p)) a.push_back(p);
  for (auto p : nested_path)
    if (strictly_inside(p)) b.push_back(p);
  return a == b;
}

bool check_exit_equivalence(const PassageTable& outer, const WeightField& bulk,
                            double rho, std::int64_t m, std::int64_t n,
                            LatticePoint z) {
  require(m >= 0 && n >= 0, "check_exit_equivalence: m and n must be nonnegative");
  const LatticePoint base0{0, 0};
  const LatticePoint base1{m, -n};
  require(leq(outer.anchor + e1 + e2, base0) && leq(outer.anchor + e1 + e2, base1),
          "check_exit_equivalence: outer base must lie strictly south-west of both bases");
  require(outer.rect.contains(z), "check_exit_equivalence: z outside the window");
  require(z.x1 > base1.x1 && z.x2 > base0.x2,
          "check_exit_equivalence: z must lie in both quadrants");

  auto nested_exit = [&](LatticePoint nb) {
    BoundarySpec b = nested_boundary_from_increments(outer, nb, rho);
    b.I.resize(static_cast<std::size_t>(z.x1 - nb.x1));
    b.J.resize(static_cast<std::size_t>(z.x2 - nb.x2));
    WeightField wf = restrict_field(bulk, {nb + e1 + e2, z});
    PassageTable t = stationary_forward(b, wf);
    return exit_time(t, z);
  };
  const std::int64_t z0 = nested_exit(base0);
  const std::int64_t z1 = nested_exit(base1);
  return (z0 <= m) == (z1 < -n);
}

DownRightSample down_right_increment_sample(const PassageTable& table,
                                            const std::vector<LatticePoint>& path) {
  DownRightSample s;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const LatticePoint a = path[k], b = path[k + 1];
    require(table.rect.contains(a) && table.rect.contains(b),
            "down_right_increment_sample: path leaves the window");
    if (b == a + e1)
      s.horizontal.push_back(table.at(b) - table.at(a));
    else if (b == a - e2)
      s.vertical.push_back(table.at(a) - table.at(b));
    else
      throw ContractError("down_right_increment_sample: steps must be e1 or -e2");
  }
  return s;
}

}  // namespace lpp
