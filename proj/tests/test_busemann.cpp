#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "lpp/busemann.hpp"

namespace {

lpp::BusemannWindow make_window(std::uint64_t seed, std::int64_t n,
                                std::int64_t wsize, double rho = 0.5) {
  lpp::RngStream stream(seed, 0);
  lpp::WeightField bulk = lpp::generate_bulk({{0, 0}, {n, n}}, stream);
  return lpp::busemann_window(std::move(bulk), rho, {{0, 0}, {wsize, wsize}});
}

}  // namespace

TEST_SUITE("busemann") {

TEST_CASE("differences are antisymmetric with positive edges") {
  const lpp::BusemannWindow bw = make_window(1, 40, 15);
  const lpp::LatticePoint a{3, 7}, b{12, 2};
  CHECK(bw.busemann(a, a) == 0.0);
  CHECK(bw.busemann(a, b) == -bw.busemann(b, a));
  for (std::int64_t y = 0; y <= 15; ++y) {
    for (std::int64_t x = 0; x <= 15; ++x) {
      CHECK(bw.edge_h({x, y}) > 0.0);
      CHECK(bw.edge_v({x, y}) > 0.0);
    }
  }
}

TEST_CASE("additivity and step duality hold on a window") {
  const lpp::BusemannWindow bw = make_window(2, 40, 15);
  CHECK(lpp::check_additivity(bw));
  CHECK(lpp::check_step_duality(bw));
}

TEST_CASE("geodesics step up-right and leave the window last") {
  const lpp::BusemannWindow bw = make_window(3, 40, 15);
  const lpp::GeodesicPath path = lpp::semi_infinite_geodesic(bw, {0, 0});
  REQUIRE(path.vertices.size() >= 2);
  for (std::size_t k = 0; k + 1 < path.vertices.size(); ++k) {
    const lpp::LatticePoint step = path.vertices[k + 1] - path.vertices[k];
    CHECK((step == lpp::e1 || step == lpp::e2));
    CHECK(bw.window.contains(path.vertices[k]));
  }
  CHECK(!bw.window.contains(path.vertices.back()));
}

TEST_CASE("coalescence point of a start with itself or its path") {
  const lpp::BusemannWindow bw = make_window(4, 40, 15);
  const lpp::CoalescenceResult same = lpp::coalescence_point(bw, {2, 3}, {2, 3});
  CHECK(same.found);
  CHECK(same.point == lpp::LatticePoint{2, 3});

  const lpp::GeodesicPath path = lpp::semi_infinite_geodesic(bw, {0, 0});
  REQUIRE(path.vertices.size() > 4);
  const lpp::LatticePoint mid = path.vertices[3];
  const lpp::CoalescenceResult on_path = lpp::coalescence_point(bw, {0, 0}, mid);
  CHECK(on_path.found);
  CHECK(on_path.point == mid);
}

TEST_CASE("dual weight is the smaller incoming edge") {
  const lpp::BusemannWindow bw = make_window(5, 40, 15);
  const lpp::DualField dual = lpp::dual_field(bw);
  CHECK(dual.rect.lo == lpp::LatticePoint{1, 1});
  CHECK(dual.rect.hi == lpp::LatticePoint{16, 16});
  for (std::int64_t y = 1; y <= 16; ++y) {
    for (std::int64_t x = 1; x <= 16; ++x) {
      const lpp::LatticePoint p{x, y};
      const double lesser = std::min(bw.busemann(p - lpp::e1, p),
                                     bw.busemann(p - lpp::e2, p));
      CHECK(bw.dual_weight(p) == lesser);
      CHECK(dual.at(p) == bw.dual_weight(p));
      CHECK(bw.dual_weight(p) > 0.0);
    }
  }
}

TEST_CASE("dual geodesic walks down-left inside the shifted window") {
  const lpp::BusemannWindow bw = make_window(6, 40, 15);
  const lpp::LatticeRect shifted{{1, 1}, {16, 16}};
  const lpp::GeodesicPath path = lpp::dual_geodesic(bw, {16, 16});
  REQUIRE(path.vertices.size() >= 2);
  for (std::size_t k = 0; k + 1 < path.vertices.size(); ++k) {
    const lpp::LatticePoint step = path.vertices[k + 1] - path.vertices[k];
    CHECK((step == lpp::LatticePoint{-1, 0} || step == lpp::LatticePoint{0, -1}));
    CHECK(shifted.contains(path.vertices[k]));
  }
  CHECK(!shifted.contains(path.vertices.back()));
}

TEST_CASE("primal and dual coalescence events agree realization by realization") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const lpp::BusemannWindow bw = make_window(100 + seed, 40, 12);
    const lpp::LatticePoint v{8, 8};
    for (std::int64_t s : {0, 2, 5, 8}) {
      const lpp::DualityEvents ev = lpp::check_duality_events(bw, v, s);
      CHECK(ev.primal_event == ev.dual_event);
      if (s == 0) {
        CHECK(!ev.primal_event);
        CHECK(!ev.dual_event);
      }
    }
  }
}

TEST_CASE("corner pairs coalesce no later than axis pairs") {
  const lpp::LatticeRect box{{0, 0}, {9, 9}};
  const std::int64_t s = 4;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const lpp::BusemannWindow bw = make_window(200 + seed, 48, 13);
    const lpp::CoalescenceResult slow =
        lpp::coalescence_point(bw, {s, 0}, {0, s}, &box);
    const lpp::CoalescenceResult corner =
        lpp::coalescence_point(bw, {0, 0}, {s, 0}, &box);
    if (slow.found) {
      CHECK(corner.found);
      CHECK(lpp::leq(corner.point, slow.point));
    }
    if (slow.inside_rect) CHECK(corner.inside_rect);
  }
}

TEST_CASE("stationary consistency around a base point") {
  const lpp::BusemannWindow bw = make_window(7, 60, 20);
  double worst = 0.0;
  CHECK(lpp::check_busemann_consistency(bw, {10, 10}, 5, &worst));
  CHECK(worst <= 1e-9);
}

TEST_CASE("dual geodesics restrict to the stationary backtrack") {
  const lpp::BusemannWindow bw = make_window(8, 60, 20);
  CHECK(lpp::check_dual_restriction(bw, {5, 5}));
  CHECK(lpp::check_dual_restriction(bw, {1, 1}));
  CHECK(lpp::check_dual_restriction(bw, {21, 21}));
}

TEST_CASE("stabilization fraction compares step decisions") {
  lpp::RngStream stream(9, 0);
  const lpp::WeightField bulk = lpp::generate_bulk({{0, 0}, {60, 60}}, stream);
  const lpp::LatticeRect window{{0, 0}, {20, 20}};
  const lpp::BusemannWindow far = lpp::busemann_window(bulk, 0.5, window);
  const lpp::BusemannWindow near = lpp::busemann_window(
      lpp::restrict_field(bulk, {{0, 0}, {40, 40}}), 0.5, window);

  CHECK(lpp::stabilization_fraction(far, far) == 0.0);
  const double frac = lpp::stabilization_fraction(near, far);
  CHECK(frac >= 0.0);
  CHECK(frac < 0.5);
}

TEST_CASE("window must stay clear of the far corner") {
  lpp::RngStream stream(10, 0);
  lpp::WeightField bulk = lpp::generate_bulk({{0, 0}, {10, 10}}, stream);
  CHECK_THROWS_AS(
      lpp::busemann_window(std::move(bulk), 0.5, {{0, 0}, {10, 10}}),
      lpp::ContractError);
}

TEST_CASE("ulp distance on positive doubles") {
  CHECK(lpp::ulp_distance(1.0, 1.0) == 0);
  const double next = std::nextafter(1.0, 2.0);
  CHECK(lpp::ulp_distance(1.0, next) == 1);
  CHECK(lpp::ulp_distance(next, 1.0) == 1);
}

}  // TEST_SUITE
