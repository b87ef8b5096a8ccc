#include <cmath>
#include <vector>

#include "doctest.h"
#include "lpp/rng.hpp"
#include "lpp/stats.hpp"

TEST_SUITE("stats") {

TEST_CASE("wilson interval endpoints") {
  const lpp::Interval zero = lpp::wilson95(0, 100);
  CHECK(zero.lo == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(zero.hi > 0.0);
  CHECK(zero.hi < 0.05);

  const lpp::Interval full = lpp::wilson95(100, 100);
  CHECK(full.hi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(full.lo > 0.95);

  const lpp::Interval half = lpp::wilson95(50, 100);
  CHECK(half.lo + half.hi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(half.lo == doctest::Approx(0.403832).epsilon(1e-4));
}

TEST_CASE("summarize computes unbiased moments") {
  const lpp::SampleSummary s = lpp::summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(s.n == 4);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("one-sample KS distance") {
  const auto identity = [](double x) { return x; };
  CHECK(lpp::ks_statistic({0.5}, identity) == doctest::Approx(0.5));

  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back((i + 0.5) / 100.0);
  CHECK(lpp::ks_statistic(grid, identity) == doctest::Approx(0.005));
}

TEST_CASE("KS critical values") {
  CHECK(lpp::ks_critical(10000, 1e-3) == doctest::Approx(0.0194947).epsilon(1e-4));
  CHECK(lpp::ks_two_sample_critical(1000, 1000, 1e-3) ==
        doctest::Approx(std::sqrt(-std::log(5e-4) / 2.0 * 2.0 / 1000.0))
            .epsilon(1e-12));
}

TEST_CASE("two-sample KS distance") {
  CHECK(lpp::ks_two_sample({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
  CHECK(lpp::ks_two_sample({1.0, 2.0}, {3.0, 4.0}) == doctest::Approx(1.0));
}

TEST_CASE("segmented lag-1 autocorrelation") {
  CHECK(lpp::lag1_autocorr({1.0, -1.0, 1.0, -1.0}, 2) == doctest::Approx(-1.0));
  CHECK(lpp::lag1_autocorr({1.0, -1.0, 1.0, -1.0}, 4) == doctest::Approx(-1.0));

  lpp::RngStream stream(6, 0);
  std::vector<double> iid;
  for (int i = 0; i < 5000; ++i) iid.push_back(stream.exponential(1.0));
  CHECK(std::abs(lpp::lag1_autocorr(iid, 50)) < 0.1);
}

TEST_CASE("least squares recovers an exact line") {
  const lpp::LineFit f = lpp::least_squares({1.0, 2.0, 3.0}, {3.0, 5.0, 7.0});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
}

TEST_CASE("exponential CDF") {
  CHECK(lpp::exp_cdf(0.0, 1.0) == 0.0);
  CHECK(lpp::exp_cdf(-1.0, 1.0) == 0.0);
  CHECK(lpp::exp_cdf(std::log(2.0), 1.0) == doctest::Approx(0.5));
  CHECK(lpp::exp_cdf(2.0 * std::log(2.0), 0.5) == doctest::Approx(0.5));
}

}  // TEST_SUITE
