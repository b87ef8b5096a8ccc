#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "lpp/rng.hpp"

namespace {

std::vector<std::uint64_t> draw(std::uint64_t seed, std::uint64_t stream,
                                int count) {
  lpp::RngStream s(seed, stream);
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(s.next_u64());
  return out;
}

}  // namespace

TEST_SUITE("rng") {

TEST_CASE("streams replay bit-identically") {
  CHECK(draw(42, 7, 64) == draw(42, 7, 64));
  CHECK(draw(0, 0, 64) == draw(0, 0, 64));
}

TEST_CASE("distinct addresses give distinct streams") {
  CHECK(draw(42, 0, 16) != draw(42, 1, 16));
  CHECK(draw(42, 0, 16) != draw(43, 0, 16));
}

TEST_CASE("uniform01 consumes one u64 and lands in [0,1)") {
  lpp::RngStream a(9, 3), b(9, 3);
  for (int i = 0; i < 32; ++i) {
    const double u = a.uniform01();
    const double expected =
        static_cast<double>(b.next_u64() >> 11) * 0x1.0p-53;
    CHECK(u == expected);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform01 mean is near one half") {
  lpp::RngStream s(123, 0);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += s.uniform01();
  CHECK(std::abs(sum / n - 0.5) < 0.012);
}

TEST_CASE("exp_from_uniform inverts the exponential CDF") {
  CHECK(lpp::RngStream::exp_from_uniform(0.0, 2.0) == 0.0);
  CHECK(lpp::RngStream::exp_from_uniform(0.5, 1.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(lpp::RngStream::exp_from_uniform(0.5, 2.0) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("exponential draws are positive with the right mean") {
  lpp::RngStream s(77, 2);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = s.exponential(2.0);
    CHECK(x >= 0.0);
    sum += x;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.02);
}

TEST_CASE("derive_seed separates masters and tags") {
  CHECK(lpp::derive_seed(1, 2) == lpp::derive_seed(1, 2));
  CHECK(lpp::derive_seed(1, 2) != lpp::derive_seed(1, 3));
  CHECK(lpp::derive_seed(1, 2) != lpp::derive_seed(2, 2));
  CHECK(lpp::mix64(0) != 0);
}

TEST_CASE("replica_stream maps to fixed stream slots") {
  lpp::RngStream direct(5, 3 * lpp::kStreamsPerReplica + 2);
  lpp::RngStream mapped = lpp::replica_stream(5, 3, 2);
  for (int i = 0; i < 8; ++i) CHECK(mapped.next_u64() == direct.next_u64());
}

}  // TEST_SUITE
