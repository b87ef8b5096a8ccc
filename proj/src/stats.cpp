#include "lpp/stats.hpp"

#include <algorithm>
#include <cmath>

#include "lpp/lattice.hpp"

namespace lpp {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

Interval wilson95(std::int64_t hits, std::int64_t n) {
  require(n >= 1 && hits >= 0 && hits <= n, "wilson95: need 0 <= hits <= n, n >= 1");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half =
      kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SampleSummary summarize(const std::vector<double>& values) {
  SampleSummary s;
  s.n = values.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(s.n - 1);
    s.se = std::sqrt(s.variance / static_cast<double>(s.n));
  }
  return s;
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  require(!samples.empty(), "ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

double ks_critical(std::size_t n, double alpha) {
  require(n >= 1 && alpha > 0.0 && alpha < 1.0, "ks_critical: bad arguments");
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), "ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  return d;
}

double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
  require(n >= 1 && m >= 1 && alpha > 0.0 && alpha < 1.0,
          "ks_two_sample_critical: bad arguments");
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return std::sqrt(-0.5 * std::log(alpha / 2.0) * (nn + mm) / (nn * mm));
}

double lag1_autocorr(const std::vector<double>& values, std::size_t segment_len) {
  require(segment_len >= 2, "lag1_autocorr: segment_len >= 2");
  require(values.size() >= segment_len, "lag1_autocorr: too few values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  require(var > 0.0, "lag1_autocorr: degenerate sample");
  double cov = 0.0;
  std::size_t pairs = 0;
  for (std::size_t base = 0; base + segment_len <= values.size();
       base += segment_len) {
    for (std::size_t i = base; i + 1 < base + segment_len; ++i) {
      cov += (values[i] - mean) * (values[i + 1] - mean);
      ++pairs;
    }
  }
  cov /= static_cast<double>(pairs);
  return cov / var;
}

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  require(xs.size() == ys.size(), "least_squares: length mismatch");
  require(xs.size() >= 2, "least_squares: need at least two points");
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  require(sxx > 0.0, "least_squares: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssres = 0.0, sstot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = f.intercept + f.slope * xs[i];
    ssres += (ys[i] - pred) * (ys[i] - pred);
    sstot += (ys[i] - my) * (ys[i] - my);
  }
  f.r2 = sstot > 0.0 ? 1.0 - ssres / sstot : 1.0;
  return f;
}

}  // namespace lpp
