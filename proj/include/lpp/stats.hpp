#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

// Small statistics kit: Wilson intervals, one- and two-sample
// Kolmogorov-Smirnov distances with their large-sample critical values,
// segmented lag-1 autocorrelation, and ordinary least squares.

namespace lpp {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// 95% Wilson score interval for a binomial proportion.
Interval wilson95(std::int64_t hits, std::int64_t n);

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double se = 0.0;        // sqrt(variance / n)
};
SampleSummary summarize(const std::vector<double>& values);

// sup-distance between the empirical CDF of samples and cdf.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

// Asymptotic critical value sqrt(-log(alpha/2)/2) / sqrt(n).
double ks_critical(std::size_t n, double alpha);

// sup-distance between the empirical CDFs of a and b.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Asymptotic critical value sqrt(-log(alpha/2)/2 * (n+m)/(n*m)).
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);

// Lag-1 autocorrelation about the global mean, with products taken only
// inside consecutive length-segment_len blocks so that independent replicas
// can be pooled without cross-replica pairs.
double lag1_autocorr(const std::vector<double>& values, std::size_t segment_len);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};
LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys);

inline double exp_cdf(double x, double rate) {
  return x <= 0.0 ? 0.0 : -std::expm1(-rate * x);
}

}  // namespace lpp
