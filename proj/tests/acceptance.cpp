#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lpp/experiments.hpp"
#include "lpp/io.hpp"
#include "lpp/passage.hpp"
#include "lpp/verify.hpp"

// One line per criterion; nonzero exit when any fails.

namespace {

constexpr std::uint64_t kSeed = 20260817ull;

int failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %2d %-24s %s  %s\n", idx, name, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void run_criterion(int idx, const char* name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [pass, detail] = body();
    report(idx, name, pass, detail);
  } catch (const std::exception& e) {
    report(idx, name, false, std::string("exception: ") + e.what());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

std::vector<const lpp::EstimateRecord*> block(
    const lpp::ExperimentResult& res, const std::string& param) {
  std::vector<const lpp::EstimateRecord*> out;
  for (const lpp::EstimateRecord& r : res.records) {
    if (r.param_name == param) out.push_back(&r);
  }
  return out;
}

// Strictly decreasing while positive; trailing exact zeros may repeat.
bool strictly_decreasing(const std::vector<const lpp::EstimateRecord*>& rs) {
  for (std::size_t i = 1; i < rs.size(); ++i) {
    const double prev = rs[i - 1]->p_hat, cur = rs[i]->p_hat;
    if (cur == 0.0 && prev >= 0.0) continue;
    if (!(cur < prev)) return false;
  }
  return true;
}

bool strictly_increasing(const std::vector<const lpp::EstimateRecord*>& rs) {
  for (std::size_t i = 1; i < rs.size(); ++i) {
    if (!(rs[i]->p_hat > rs[i - 1]->p_hat)) return false;
  }
  return true;
}

std::string p_list(const std::vector<const lpp::EstimateRecord*>& rs) {
  std::string out = "p=[";
  for (std::size_t i = 0; i < rs.size(); ++i) {
    out += fmt("%.4g", rs[i]->p_hat);
    if (i + 1 < rs.size()) out += ", ";
  }
  out += "]";
  return out;
}

std::pair<bool, std::string> all_checks(const std::vector<lpp::CheckResult>& rs,
                                        double elapsed) {
  if (rs.empty()) return {false, "empty check list"};
  bool pass = true;
  std::string failed;
  for (const lpp::CheckResult& r : rs) {
    if (r.pass) continue;
    pass = false;
    if (!failed.empty()) failed += ", ";
    failed += r.name + " (" + fmt("%.4g vs %.4g", r.value, r.threshold) + ")";
  }
  std::string detail = fmt("%.0f checks in %.1fs",
                           static_cast<double>(rs.size()), elapsed);
  if (!pass) detail += "; failed: " + failed;
  return {pass, detail};
}

std::pair<bool, std::string> criterion_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  int bad = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    lpp::RngStream size_stream(seed, 9);
    const std::int64_t wx = static_cast<std::int64_t>(size_stream.next_u64() % 6);
    const std::int64_t wy = static_cast<std::int64_t>(size_stream.next_u64() % 6);
    const lpp::LatticeRect rect{{0, 0}, {wx, wy}};
    lpp::RngStream weight_stream(seed, 0);
    const lpp::WeightField f = lpp::generate_bulk(rect, weight_stream);

    const double forward = lpp::lpp_forward(f, rect.lo).at(rect.hi);
    const auto [brute, brute_path] = lpp::brute_force_lpp(f, rect.lo, rect.hi);
    const lpp::PassageTable back = lpp::lpp_backward(f, rect.hi);
    const lpp::GeodesicPath traced = lpp::trace_geodesic(back, rect.lo);

    const bool ok = forward == brute &&
                    lpp::path_sum_from_start(f, brute_path) == forward &&
                    lpp::path_sum_from_end(f, traced) == back.at(rect.lo);
    if (!ok) ++bad;
  }
  const double dt = seconds_since(t0);
  return {bad == 0 && dt < 10.0,
          fmt("1000 fields, %g mismatches, %.1fs (limit 10s)",
              static_cast<double>(bad), dt)};
}

std::pair<bool, std::string> criterion_lemmas() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<lpp::CheckResult> rs = lpp::run_exact_lemma_suite(200, kSeed, 0);
  const double dt = seconds_since(t0);
  auto [pass, detail] = all_checks(rs, dt);
  if (dt >= 120.0) {
    pass = false;
    detail += " (over the 120s limit)";
  }
  return {pass, detail};
}

std::pair<bool, std::string> criterion_stationarity() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<lpp::CheckResult> rs = lpp::run_stationarity_check(kSeed, 0);
  return all_checks(rs, seconds_since(t0));
}

std::pair<bool, std::string> criterion_marginals() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<lpp::CheckResult> rs =
      lpp::run_busemann_marginals_check(kSeed, 0, 4.0);
  return all_checks(rs, seconds_since(t0));
}

std::pair<bool, std::string> criterion_coal_slow() {
  lpp::ExperimentConfig cfg;
  cfg.experiment = lpp::Experiment::CoalSlow;
  cfg.rho = 0.5;
  cfg.N = 1000;
  cfg.grid = {0.05, 0.1, 0.2, 0.4};
  cfg.replicas = 10000;
  cfg.master_seed = kSeed;

  const lpp::ExperimentResult res = lpp::run_experiment(cfg, 0);
  const auto deltas = block(res, "delta");
  const bool increasing = strictly_increasing(deltas);
  bool slope_ok = false;
  double slope = 0.0, r2 = 0.0;
  if (!res.fits.empty()) {
    slope = res.fits[0].slope;
    r2 = res.fits[0].r_squared;
    slope_ok = slope >= 0.7 && slope <= 1.3;
  }
  return {increasing && slope_ok,
          p_list(deltas) + fmt(", log-log slope=%.3f (band [0.7,1.3]), r2=%.3f",
                               slope, r2)};
}

std::pair<bool, std::string> criterion_coal_fast() {
  lpp::ExperimentConfig cfg;
  cfg.experiment = lpp::Experiment::CoalFast;
  cfg.rho = 0.5;
  cfg.N = 1000;
  cfg.grid = {0.8, 1.2, 1.6};
  cfg.replicas = 100000;
  cfg.master_seed = kSeed;

  const lpp::ExperimentResult res = lpp::run_experiment(cfg, 0);
  const auto rs = block(res, "r");
  const bool decreasing = strictly_decreasing(rs);
  bool fit_ok = false;
  double slope = 0.0, r2 = 0.0;
  if (!res.fits.empty()) {
    slope = res.fits[0].slope;
    r2 = res.fits[0].r_squared;
    fit_ok = slope > 0.0 && r2 >= 0.8;
  }
  return {decreasing && fit_ok,
          p_list(rs) + fmt(", -log p vs r^3 slope=%.3f (>0), r2=%.3f (>=0.8)",
                           slope, r2)};
}

std::pair<bool, std::string> criterion_exit_tail() {
  lpp::ExperimentConfig cfg;
  cfg.experiment = lpp::Experiment::ExitTail;
  cfg.rho = 0.5;
  cfg.N = 1000;
  cfg.grid = {0.5, 1.0, 1.5, 2.0};
  cfg.aux_grid = {0.5, 1.0, 2.0};
  cfg.replicas = 10000;
  cfg.master_seed = kSeed;

  const lpp::ExperimentResult res = lpp::run_experiment(cfg, 0);
  const auto rs = block(res, "r");
  const auto bp = block(res, "b_plus");
  const auto bm = block(res, "b_minus");
  const bool tail_ok = strictly_decreasing(rs);
  const bool plus_ok = strictly_decreasing(bp);
  const bool minus_ok = strictly_decreasing(bm);
  double slope = 0.0;
  if (!res.fits.empty()) slope = res.fits[0].slope;
  return {tail_ok && plus_ok && minus_ok && slope > 0.0,
          "tail " + p_list(rs) + ", b+ " + p_list(bp) + ", b- " + p_list(bm) +
              fmt(", -log p vs r^3 slope=%.3f", slope)};
}

std::pair<bool, std::string> criterion_small_exit() {
  lpp::ExperimentConfig small;
  small.experiment = lpp::Experiment::ExitSmall;
  small.rho = 0.5;
  small.N = 1000;
  small.grid = {0.05, 0.1, 0.2, 0.4};
  small.replicas = 10000;
  small.master_seed = kSeed;

  const lpp::ExperimentResult sres = lpp::run_experiment(small, 0);
  bool slope_ok = false;
  double slope = 0.0;
  if (!sres.fits.empty()) {
    slope = sres.fits[0].slope;
    slope_ok = slope >= 0.7 && slope <= 1.3;
  }

  lpp::ExperimentConfig fluct = small;
  fluct.experiment = lpp::Experiment::Fluctuation;
  const lpp::ExperimentResult fres = lpp::run_experiment(fluct, 0);
  const auto fd = block(fres, "delta");
  const bool increasing = strictly_increasing(fd);
  double ratio = 1.0;
  if (fd.size() == 4 && fd[3]->p_hat > 0.0) ratio = fd[1]->p_hat / fd[3]->p_hat;
  const bool ratio_ok = ratio < 0.6;

  return {slope_ok && increasing && ratio_ok,
          "small-exit " + p_list(block(sres, "delta")) +
              fmt(" slope=%.3f (band [0.7,1.3]); fluctuation ", slope) +
              p_list(fd) + fmt(" p(0.1)/p(0.4)=%.3f (<0.6)", ratio)};
}

std::pair<bool, std::string> criterion_bounds() {
  const auto t0 = std::chrono::steady_clock::now();

  lpp::ExperimentConfig rn;
  rn.experiment = lpp::Experiment::RadonNikodym;
  rn.rho = 0.5;
  rn.lambda = 0.75;
  rn.grid = {1.0};
  rn.replicas = 1000000;
  rn.master_seed = kSeed;
  const lpp::ExperimentResult rn_res = lpp::run_experiment(rn, 0);
  const double closed = 1.125;
  const double mc = rn_res.checks.at(0).value;
  const bool rn_ok = std::abs(mc - closed) <= 0.01 * closed;

  lpp::ExperimentConfig rw;
  rw.experiment = lpp::Experiment::RwBound;
  rw.alpha = 2.0;
  rw.beta = 1.0;
  rw.grid = {5.0, 10.0, 20.0, 50.0, 100.0};
  rw.replicas = 200000;
  rw.master_seed = kSeed;
  const lpp::ExperimentResult rw_res = lpp::run_experiment(rw, 0);
  bool monotone = true;
  for (std::size_t i = 1; i < rw_res.records.size(); ++i) {
    monotone = monotone &&
               rw_res.records[i].hits <= rw_res.records[i - 1].hits;
  }
  bool term_reported = !rw_res.checks.empty();
  for (const lpp::CheckOutcome& c : rw_res.checks) {
    term_reported =
        term_reported && c.detail.find("constant-free term") != std::string::npos;
  }

  const double dt = seconds_since(t0);
  const bool in_time = dt < 60.0;
  return {rn_ok && monotone && term_reported && in_time,
          fmt("mc=%.5f vs closed=1.125 (tol 1%%), bound held, ", mc) +
              fmt("rw monotone over 5 lengths, %.1fs (limit 60s)", dt)};
}

std::pair<bool, std::string> criterion_determinism() {
  lpp::ExperimentConfig cfg;
  cfg.experiment = lpp::Experiment::ExitTail;
  cfg.rho = 0.5;
  cfg.N = 200;
  cfg.grid = {0.5, 1.0};
  cfg.aux_grid = {1.0};
  cfg.replicas = 500;
  cfg.master_seed = 4242;

  const std::string one = lpp::csv_string(lpp::run_experiment(cfg, 1).records);
  const std::string three = lpp::csv_string(lpp::run_experiment(cfg, 3).records);
  const std::string four = lpp::csv_string(lpp::run_experiment(cfg, 4).records);
  const bool equal = one == three && one == four;
  return {equal, equal ? "csv bytes identical for workers 1, 3, 4"
                       : "csv bytes differ across worker counts"};
}

}  // namespace

int main() {
  run_criterion(1, "oracle_equivalence", criterion_oracle);
  run_criterion(2, "exact_lemma_suite", criterion_lemmas);
  run_criterion(3, "stationarity", criterion_stationarity);
  run_criterion(4, "busemann_marginals", criterion_marginals);
  run_criterion(5, "slow_coalescence", criterion_coal_slow);
  run_criterion(6, "fast_coalescence", criterion_coal_fast);
  run_criterion(7, "exit_tail", criterion_exit_tail);
  run_criterion(8, "small_exit_fluctuation", criterion_small_exit);
  run_criterion(9, "auxiliary_bounds", criterion_bounds);
  run_criterion(10, "determinism", criterion_determinism);

  if (failures > 0) {
    std::printf("%d criteria failed\n", failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
