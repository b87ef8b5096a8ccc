#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "lpp/passage.hpp"

namespace {

lpp::WeightField tiny_field() {
  lpp::WeightField f{{{0, 0}, {1, 1}}, {1.0, 2.0, 3.0, 4.0}};
  return f;
}

lpp::WeightField random_field(const lpp::LatticeRect& rect, std::uint64_t seed) {
  lpp::RngStream stream(seed, 0);
  return lpp::generate_bulk(rect, stream);
}

}  // namespace

TEST_SUITE("passage") {

TEST_CASE("forward table on the 2x2 example") {
  const lpp::WeightField f = tiny_field();
  const lpp::PassageTable g = lpp::lpp_forward(f, {0, 0});
  CHECK(g.at({0, 0}) == 1.0);
  CHECK(g.at({1, 0}) == 3.0);
  CHECK(g.at({0, 1}) == 4.0);
  CHECK(g.at({1, 1}) == 8.0);
}

TEST_CASE("backward table mirrors the forward value") {
  const lpp::WeightField f = tiny_field();
  const lpp::PassageTable g = lpp::lpp_backward(f, {1, 1});
  CHECK(g.at({1, 1}) == 4.0);
  CHECK(g.at({0, 1}) == 7.0);
  CHECK(g.at({1, 0}) == 6.0);
  CHECK(g.at({0, 0}) == 8.0);
}

TEST_CASE("trace_geodesic picks the maximizing successor") {
  const lpp::WeightField f = tiny_field();
  const lpp::PassageTable g = lpp::lpp_backward(f, {1, 1});
  const lpp::GeodesicPath path = lpp::trace_geodesic(g, {0, 0});
  REQUIRE(path.vertices.size() == 3);
  CHECK(path.vertices[0] == lpp::LatticePoint{0, 0});
  CHECK(path.vertices[1] == lpp::LatticePoint{0, 1});
  CHECK(path.vertices[2] == lpp::LatticePoint{1, 1});
  CHECK(lpp::path_sum_from_end(f, path) == g.at({0, 0}));
}

TEST_CASE("brute force oracle agrees exactly on random small fields") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    lpp::RngStream stream(seed, 1);
    const std::int64_t wx = static_cast<std::int64_t>(stream.next_u64() % 5);
    const std::int64_t wy = static_cast<std::int64_t>(stream.next_u64() % 5);
    const lpp::LatticeRect rect{{0, 0}, {wx, wy}};
    const lpp::WeightField f = random_field(rect, seed);

    const double forward = lpp::lpp_forward(f, rect.lo).at(rect.hi);
    const auto [brute, brute_path] = lpp::brute_force_lpp(f, rect.lo, rect.hi);
    CHECK(forward == brute);
    CHECK(lpp::path_sum_from_start(f, brute_path) == forward);

    const lpp::PassageTable back = lpp::lpp_backward(f, rect.hi);
    const lpp::GeodesicPath traced = lpp::trace_geodesic(back, rect.lo);
    CHECK(lpp::path_sum_from_end(f, traced) == back.at(rect.lo));
    CHECK(back.at(rect.lo) == doctest::Approx(forward).epsilon(1e-12));
  }
}

TEST_CASE("increments are table differences") {
  const lpp::WeightField f = tiny_field();
  const lpp::PassageTable g = lpp::lpp_forward(f, {0, 0});
  const lpp::IncrementField h = lpp::increments(g, true);
  const lpp::IncrementField v = lpp::increments(g, false);
  CHECK(h.at({1, 0}) == 2.0);
  CHECK(h.at({1, 1}) == 4.0);
  CHECK(v.at({0, 1}) == 3.0);
  CHECK(v.at({1, 1}) == 5.0);
}

TEST_CASE("increment recursion matches table differencing") {
  const lpp::LatticeRect rect{{0, 0}, {12, 9}};
  const lpp::WeightField f = random_field(rect, 31);
  const lpp::PassageTable g = lpp::lpp_forward(f, rect.lo);
  const auto [ri, rj] = lpp::increment_recursion(f, rect.lo);
  const lpp::IncrementField di = lpp::increments(g, true);
  const lpp::IncrementField dj = lpp::increments(g, false);

  for (std::int64_t y = 0; y <= rect.hi.x2; ++y) {
    for (std::int64_t x = 1; x <= rect.hi.x1; ++x) {
      CHECK(ri.at({x, y}) == doctest::Approx(di.at({x, y})).epsilon(1e-9));
    }
  }
  for (std::int64_t y = 1; y <= rect.hi.x2; ++y) {
    for (std::int64_t x = 0; x <= rect.hi.x1; ++x) {
      CHECK(rj.at({x, y}) == doctest::Approx(dj.at({x, y})).epsilon(1e-9));
    }
  }
  for (std::int64_t x = 1; x <= rect.hi.x1; ++x) {
    CHECK(ri.at({x, 0}) == f.at({x, 0}));
  }
  for (std::int64_t y = 1; y <= rect.hi.x2; ++y) {
    CHECK(rj.at({0, y}) == f.at({0, y}));
  }
}

TEST_CASE("blocked kernel matches the serial kernel bitwise") {
  const std::int64_t nx = 317, ny = 203;
  std::vector<double> w(static_cast<std::size_t>(nx * ny));
  lpp::RngStream stream(2024, 0);
  for (double& x : w) x = stream.exponential(1.0);

  std::vector<double> serial(w.size()), blocked(w.size()), dispatch(w.size());
  lpp::fill_forward(w.data(), nx, ny, serial.data());
  lpp::fill_forward_blocked(w.data(), nx, ny, blocked.data(), 64);
  lpp::run_fill_kernel(w.data(), nx, ny, dispatch.data());
  CHECK(serial == blocked);
  CHECK(serial == dispatch);

  std::vector<double> blocked_default(w.size());
  lpp::fill_forward_blocked(w.data(), nx, ny, blocked_default.data());
  CHECK(serial == blocked_default);
}

TEST_CASE("path sums agree from either end") {
  const lpp::LatticeRect rect{{0, 0}, {20, 15}};
  const lpp::WeightField f = random_field(rect, 8);
  const lpp::PassageTable back = lpp::lpp_backward(f, rect.hi);
  const lpp::GeodesicPath path = lpp::trace_geodesic(back, rect.lo);
  CHECK(lpp::path_sum_from_start(f, path) ==
        doctest::Approx(lpp::path_sum_from_end(f, path)).epsilon(1e-12));
}

TEST_CASE("contract violations throw") {
  lpp::RngStream stream(1, 0);
  CHECK_THROWS_AS(lpp::generate_bulk({{0, 0}, {16384, 8192}}, stream),
                  lpp::CapacityError);

  const lpp::LatticeRect rect{{0, 0}, {12, 12}};
  const lpp::WeightField f = random_field(rect, 3);
  CHECK_THROWS_AS(lpp::brute_force_lpp(f, {0, 0}, {12, 12}), lpp::CapacityError);

  const lpp::PassageTable fwd = lpp::lpp_forward(f, {0, 0});
  CHECK_THROWS_AS(lpp::trace_geodesic(fwd, {0, 0}), lpp::ContractError);
}

}  // TEST_SUITE
