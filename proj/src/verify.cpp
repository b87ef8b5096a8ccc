#include "lpp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_map>
#include <vector>

#include "lpp/busemann.hpp"
#include "lpp/experiments.hpp"
#include "lpp/field.hpp"
#include "lpp/rng.hpp"
#include "lpp/stats.hpp"

namespace lpp {
namespace {

constexpr std::uint64_t kTagLemmas = 0xA1;
constexpr std::uint64_t kTagStationarity = 0xA2;
constexpr std::uint64_t kTagMarginals = 0xA3;
constexpr std::uint64_t kTagStepDistribution = 0xA4;
constexpr std::uint64_t kTagStabilization = 0xA5;
constexpr std::uint64_t kTagBounds = 0xA6;

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

constexpr int kLemmaChecks = 9;
const char* const kLemmaNames[kLemmaChecks] = {
    "increment_monotonicity", "nested_geodesic_agreement", "exit_equivalence",
    "edge_additivity",        "step_duality",              "geodesic_edge_crossing",
    "dual_restriction",       "busemann_consistency",      "duality_event_equality",
};

// Shifted-base increment ordering, zero tolerance. The recursion map is
// monotone in its state and floating-point rounding is monotone, so the real
// ordering survives the arithmetic exactly.
bool increment_ordering_holds(const WeightField& field, std::int64_t n) {
  const LatticePoint hi{n, n};
  const IncrementPair mid =
      increment_recursion(restrict_field(field, {{1, 1}, hi}), {1, 1});
  const IncrementPair west =
      increment_recursion(restrict_field(field, {{0, 1}, hi}), {0, 1});
  const IncrementPair south =
      increment_recursion(restrict_field(field, {{1, 0}, hi}), {1, 0});

  for (std::int64_t y2 = 1; y2 <= n; ++y2) {
    for (std::int64_t y1 = 2; y1 <= n; ++y1) {
      const LatticePoint y{y1, y2};
      const double a = west.I.at(y), b = mid.I.at(y), c = south.I.at(y);
      if (!(a <= b && b <= c)) return false;
    }
  }
  for (std::int64_t y2 = 2; y2 <= n; ++y2) {
    for (std::int64_t y1 = 1; y1 <= n; ++y1) {
      const LatticePoint y{y1, y2};
      const double a = west.J.at(y), b = mid.J.at(y), c = south.J.at(y);
      if (!(a >= b && b >= c)) return false;
    }
  }
  return true;
}

// A dual step at the representative y can only cross the primal edge decided
// at y - (1,1), and only when their directions oppose.
bool paths_never_cross(const BusemannWindow& bw) {
  const GeodesicPath primal = semi_infinite_geodesic(bw, bw.window.lo);
  const GeodesicPath dual = dual_geodesic(bw, bw.window.hi + e1 + e2);

  std::unordered_map<std::int64_t, bool> primal_is_e1;
  for (std::size_t i = 0; i + 1 < primal.vertices.size(); ++i) {
    primal_is_e1[pack_point(primal.vertices[i])] =
        primal.vertices[i + 1].x1 > primal.vertices[i].x1;
  }
  for (std::size_t j = 0; j + 1 < dual.vertices.size(); ++j) {
    const LatticePoint y = dual.vertices[j];
    const bool dual_is_h = dual.vertices[j + 1].x1 < y.x1;
    const auto it = primal_is_e1.find(pack_point(y - e1 - e2));
    if (it == primal_is_e1.end()) continue;
    const bool crossing = dual_is_h ? !it->second : it->second;
    if (crossing) return false;
  }
  return true;
}

void one_lemma_realization(std::int64_t n, std::uint64_t seed, std::int64_t rep,
                           std::uint8_t* row) {
  const double rho = 0.5;
  RngStream bulk_stream = replica_stream(seed, rep, 0);
  const WeightField field = generate_bulk({{0, 0}, {n, n}}, bulk_stream);

  const LatticePoint w{n / 2, n / 2};
  const BusemannWindow bw = busemann_window(field, rho, {{0, 0}, w});

  row[0] = !increment_ordering_holds(field, n);

  {
    RngStream boundary_stream = replica_stream(seed, rep, 1);
    const BoundarySpec sw = make_sw_boundary(rho, {0, 0}, n, n, boundary_stream);
    const WeightField inner = restrict_field(field, {{1, 1}, {n, n}});
    const PassageTable outer = stationary_forward(sw, inner);
    row[1] = !(check_nested_geodesic_agreement(outer, inner, rho, {n / 5, n / 4},
                                               {n, n}) &&
               check_nested_geodesic_agreement(outer, inner, rho, {n / 3, n / 6},
                                               {n - 1, n}));
  }

  {
    const std::int64_t m = 3, steps_down = 2;
    const LatticePoint base{-1, -steps_down - 1};
    RngStream outer_stream = replica_stream(seed, rep, 2);
    const BoundarySpec sw =
        make_sw_boundary(rho, base, n + 1, n + 1 + steps_down, outer_stream);
    const WeightField bulk = generate_bulk({{0, -steps_down}, {n, n}}, outer_stream);
    const PassageTable outer = stationary_forward(sw, bulk);
    row[2] = !(check_exit_equivalence(outer, bulk, rho, m, steps_down, {n, n}) &&
               check_exit_equivalence(outer, bulk, rho, m, steps_down, {n - 1, n}));
  }

  row[3] = !check_additivity(bw, 4);
  row[4] = !check_step_duality(bw);
  row[5] = !paths_never_cross(bw);
  row[6] = !(check_dual_restriction(bw, w + e1 + e2) &&
             check_dual_restriction(bw, {w.x1 / 2 + 1, w.x2 / 2 + 1}));
  row[7] = !check_busemann_consistency(bw, {w.x1 / 2, w.x2 / 2},
                                       std::min<std::int64_t>(10, w.x1 / 2 - 1));

  {
    const LatticePoint v_box = characteristic_point(rho, n).point;
    const double n23 = scale_n23(n);
    const std::int64_t v_min = std::min(v_box.x1, v_box.x2);
    bool ok = true;
    for (double factor : {0.1, 2.0}) {
      const std::int64_t s = std::min(tolerant_floor(factor * n23), v_min);
      const DualityEvents ev = check_duality_events(bw, v_box, s);
      ok = ok && ev.primal_event == ev.dual_event;
    }
    row[8] = !ok;
  }
}

}  // namespace

std::vector<CheckResult> run_exact_lemma_suite(std::int64_t realizations,
                                               std::uint64_t seed, int workers) {
  require(realizations >= 1, "run_exact_lemma_suite: realizations must be positive");
  std::vector<CheckResult> out;
  for (std::int64_t n : {std::int64_t{50}, std::int64_t{200}}) {
    const std::uint64_t sn =
        derive_seed(derive_seed(seed, kTagLemmas), static_cast<std::uint64_t>(n));
    std::vector<std::uint8_t> rows(
        static_cast<std::size_t>(realizations) * kLemmaChecks, 0);
    run_replicas(realizations, workers, [&](std::int64_t rep) {
      one_lemma_realization(n, sn, rep,
                            rows.data() + static_cast<std::size_t>(rep) * kLemmaChecks);
    });
    for (int c = 0; c < kLemmaChecks; ++c) {
      std::int64_t violations = 0;
      for (std::int64_t rep = 0; rep < realizations; ++rep) {
        violations += rows[static_cast<std::size_t>(rep) * kLemmaChecks +
                           static_cast<std::size_t>(c)];
      }
      CheckResult r;
      r.name = std::string(kLemmaNames[c]) + "_N" + std::to_string(n);
      r.pass = violations == 0;
      r.value = static_cast<double>(violations);
      r.threshold = 0.0;
      r.detail = std::to_string(realizations) + " realizations";
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<CheckResult> run_stationarity_check(std::uint64_t seed, int workers) {
  const double rho = 0.5;
  const std::int64_t n = 500;
  const std::int64_t replicas = 2000;
  const std::size_t pairs = 25;
  const LatticePoint v = characteristic_point(rho, n).point;
  const LatticePoint hi = v + e1 + e2;
  const std::uint64_t sd = derive_seed(seed, kTagStationarity);

  std::vector<double> h_pool(static_cast<std::size_t>(replicas) * pairs);
  std::vector<double> v_pool(static_cast<std::size_t>(replicas) * pairs);
  std::vector<double> interleaved(static_cast<std::size_t>(replicas) * 2 * pairs);

  run_replicas(replicas, workers, [&](std::int64_t rep) {
    RngStream boundary_stream = replica_stream(sd, rep, 1);
    const BoundarySpec sw = make_sw_boundary(rho, {0, 0}, hi.x1, hi.x2, boundary_stream);
    RngStream bulk_stream = replica_stream(sd, rep, 0);
    const WeightField bulk = generate_bulk({{1, 1}, hi}, bulk_stream);
    const PassageTable table = stationary_forward(sw, bulk);

    std::vector<LatticePoint> path;
    path.reserve(2 * pairs + 1);
    LatticePoint p{10, 110};
    path.push_back(p);
    for (std::size_t k = 0; k < pairs; ++k) {
      p = p + e1;
      path.push_back(p);
      p = p - e2;
      path.push_back(p);
    }
    const DownRightSample sample = down_right_increment_sample(table, path);
    const std::size_t base = static_cast<std::size_t>(rep) * pairs;
    const std::size_t ibase = static_cast<std::size_t>(rep) * 2 * pairs;
    for (std::size_t k = 0; k < pairs; ++k) {
      h_pool[base + k] = sample.horizontal[k];
      v_pool[base + k] = sample.vertical[k];
      interleaved[ibase + 2 * k] = sample.horizontal[k];
      interleaved[ibase + 2 * k + 1] = sample.vertical[k];
    }
  });

  const double h_rate = 1.0 - rho;
  const double v_rate = rho;
  const SampleSummary sh = summarize(h_pool);
  const SampleSummary sv = summarize(v_pool);
  const double ks_h = ks_statistic(h_pool, [&](double x) { return exp_cdf(x, h_rate); });
  const double ks_v = ks_statistic(v_pool, [&](double x) { return exp_cdf(x, v_rate); });
  const double crit = ks_critical(h_pool.size(), 1e-3);
  const double lag1 = lag1_autocorr(interleaved, 2 * pairs);

  std::vector<CheckResult> out;
  out.push_back({"staircase_h_mean", std::abs(sh.mean - 1.0 / h_rate) <= 3.0 * sh.se,
                 sh.mean, 3.0 * sh.se,
                 fmt("target %.6g within 3 se = %.3g", 1.0 / h_rate, 3.0 * sh.se)});
  out.push_back({"staircase_v_mean", std::abs(sv.mean - 1.0 / v_rate) <= 3.0 * sv.se,
                 sv.mean, 3.0 * sv.se,
                 fmt("target %.6g within 3 se = %.3g", 1.0 / v_rate, 3.0 * sv.se)});
  out.push_back({"staircase_h_ks", ks_h <= crit, ks_h, crit,
                 fmt("n=%.0f, alpha=1e-3", static_cast<double>(h_pool.size()))});
  out.push_back({"staircase_v_ks", ks_v <= crit, ks_v, crit,
                 fmt("n=%.0f, alpha=1e-3", static_cast<double>(v_pool.size()))});
  out.push_back({"staircase_lag1", std::abs(lag1) < 0.05, lag1, 0.05,
                 fmt("pooled over %.0f replicas", static_cast<double>(replicas))});
  return out;
}

std::vector<CheckResult> run_busemann_marginals_check(std::uint64_t seed,
                                                      int workers,
                                                      double far_multiplier) {
  const double rho = 0.5;
  const std::int64_t n = 200;
  const std::int64_t replicas = 10000;
  const std::int64_t far_n =
      tolerant_floor(far_multiplier * static_cast<double>(n));
  const LatticePoint u = characteristic_point(rho, far_n).point;
  const LatticePoint probe{50, 50};
  const LatticeRect window{probe - e1 - e2, probe + e1 + e2};
  require(leq(window.hi + e1 + e2, u),
          "run_busemann_marginals_check: far target too close to the probe");
  const std::uint64_t sd = derive_seed(seed, kTagMarginals);

  std::vector<double> h_edge(static_cast<std::size_t>(replicas));
  std::vector<double> v_edge(static_cast<std::size_t>(replicas));
  std::vector<double> dual_w(static_cast<std::size_t>(replicas));

  run_replicas(replicas, workers, [&](std::int64_t rep) {
    RngStream bulk_stream = replica_stream(sd, rep, 0);
    WeightField bulk = generate_bulk({window.lo, u}, bulk_stream);
    const BusemannWindow bw = busemann_window(std::move(bulk), rho, window);
    h_edge[static_cast<std::size_t>(rep)] = bw.edge_h(probe);
    v_edge[static_cast<std::size_t>(rep)] = bw.edge_v(probe);
    dual_w[static_cast<std::size_t>(rep)] = bw.dual_weight(probe);
  });

  const double crit = ks_critical(static_cast<std::size_t>(replicas), 1e-3);
  const double ks_h =
      ks_statistic(h_edge, [&](double x) { return exp_cdf(x, 1.0 - rho); });
  const double ks_v = ks_statistic(v_edge, [&](double x) { return exp_cdf(x, rho); });
  const double ks_d = ks_statistic(dual_w, [](double x) { return exp_cdf(x, 1.0); });

  std::vector<CheckResult> out;
  out.push_back({"busemann_h_edge_ks", ks_h <= crit, ks_h, crit,
                 fmt("Exp(%.3g), one sample per replica", 1.0 - rho)});
  out.push_back({"busemann_v_edge_ks", ks_v <= crit, ks_v, crit,
                 fmt("Exp(%.3g), one sample per replica", rho)});
  out.push_back({"dual_weight_ks", ks_d <= crit, ks_d, crit,
                 "Exp(1), one sample per replica"});
  return out;
}

std::vector<CheckResult> run_step_distribution_check(std::uint64_t seed,
                                                     int workers) {
  const double rho = 0.5;
  const std::int64_t n = 200;
  const std::int64_t per_side = 1000;
  const std::size_t steps = 64;
  const LatticePoint u = characteristic_point(rho, 4 * n).point;
  const LatticeRect window{{0, 0}, {80, 80}};
  const std::uint64_t sd = derive_seed(seed, kTagStepDistribution);

  std::vector<double> primal_frac(static_cast<std::size_t>(per_side));
  std::vector<double> dual_frac(static_cast<std::size_t>(per_side));

  run_replicas(2 * per_side, workers, [&](std::int64_t rep) {
    RngStream bulk_stream = replica_stream(sd, rep, 0);
    WeightField bulk = generate_bulk({{0, 0}, u}, bulk_stream);
    const BusemannWindow bw = busemann_window(std::move(bulk), rho, window);
    if (rep < per_side) {
      const GeodesicPath g = semi_infinite_geodesic(bw, {10, 10});
      std::size_t count = 0;
      for (std::size_t i = 0; i < steps; ++i) {
        count += g.vertices[i + 1].x1 > g.vertices[i].x1;
      }
      primal_frac[static_cast<std::size_t>(rep)] =
          static_cast<double>(count) / static_cast<double>(steps);
    } else {
      const GeodesicPath g = dual_geodesic(bw, {70, 70});
      std::size_t count = 0;
      for (std::size_t i = 0; i < steps; ++i) {
        count += g.vertices[i + 1].x1 < g.vertices[i].x1;
      }
      dual_frac[static_cast<std::size_t>(rep - per_side)] =
          static_cast<double>(count) / static_cast<double>(steps);
    }
  });

  const double d = ks_two_sample(primal_frac, dual_frac);
  const double crit = ks_two_sample_critical(static_cast<std::size_t>(per_side),
                                             static_cast<std::size_t>(per_side), 1e-3);
  std::vector<CheckResult> out;
  out.push_back({"step_fraction_two_sample_ks", d <= crit, d, crit,
                 fmt("fraction of axis steps over the first %.0f steps, "
                     "%.0f replicas per side",
                     static_cast<double>(steps), static_cast<double>(per_side))});
  return out;
}

std::vector<CheckResult> run_stabilization_check(std::uint64_t seed, int workers) {
  const double rho = 0.5;
  const std::int64_t n = 200;
  const std::int64_t realizations = 5;
  const LatticePoint far_near = characteristic_point(rho, 4 * n).point;
  const LatticePoint far_far = characteristic_point(rho, 8 * n).point;
  const LatticeRect window{{0, 0}, {n / 2, n / 2}};
  const std::uint64_t sd = derive_seed(seed, kTagStabilization);

  std::vector<double> fractions(static_cast<std::size_t>(realizations));
  run_replicas(realizations, workers, [&](std::int64_t rep) {
    RngStream bulk_stream = replica_stream(sd, rep, 0);
    const WeightField bulk = generate_bulk({{0, 0}, far_far}, bulk_stream);
    const BusemannWindow near_window =
        busemann_window(restrict_field(bulk, {{0, 0}, far_near}), rho, window);
    const BusemannWindow far_window = busemann_window(bulk, rho, window);
    fractions[static_cast<std::size_t>(rep)] =
        stabilization_fraction(near_window, far_window);
  });

  double worst = 0.0;
  std::string detail = "per realization:";
  for (double f : fractions) {
    worst = std::max(worst, f);
    detail += fmt(" %.4g", f);
  }
  std::vector<CheckResult> out;
  out.push_back({"stabilization_fraction", worst < 0.05, worst, 0.05, detail});
  return out;
}

std::vector<CheckResult> run_bounds_suite(std::uint64_t seed, int workers) {
  const std::uint64_t sd = derive_seed(seed, kTagBounds);
  std::vector<CheckResult> out;

  {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::RadonNikodym;
    cfg.rho = 0.5;
    cfg.lambda = 0.75;
    cfg.grid = {1.0};
    cfg.replicas = 1000000;
    cfg.master_seed = derive_seed(sd, 1);
    CheckResult r;
    r.name = "radon_nikodym_closed_vs_mc";
    try {
      const ExperimentResult res = run_experiment(cfg, workers);
      const CheckOutcome& c = res.checks.front();
      r.pass = c.pass;
      r.value = c.value;
      r.threshold = c.tolerance;
      r.detail = c.detail;
    } catch (const VerificationError& e) {
      r.pass = false;
      r.detail = e.what();
    }
    out.push_back(std::move(r));
  }

  {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::RwBound;
    cfg.alpha = 2.0;
    cfg.beta = 1.0;
    cfg.grid = {5.0, 10.0, 20.0, 50.0, 100.0};
    cfg.replicas = 200000;
    cfg.master_seed = derive_seed(sd, 2);
    CheckResult r;
    r.name = "rw_bound_monotone";
    try {
      const ExperimentResult res = run_experiment(cfg, workers);
      r.pass = true;
      r.value = static_cast<double>(res.records.size());
      r.threshold = 0.0;
      std::string detail = "p_hat by n:";
      for (const EstimateRecord& rec : res.records) detail += fmt(" %.4g", rec.p_hat);
      detail += fmt("; constant-free term %.4g",
                    (cfg.alpha - cfg.beta) / cfg.alpha);
      r.detail = std::move(detail);
    } catch (const VerificationError& e) {
      r.pass = false;
      r.detail = e.what();
    }
    out.push_back(std::move(r));
  }

  {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::VarianceIdentity;
    cfg.rho = 0.5;
    cfg.N = 300;
    cfg.replicas = 5000;
    cfg.master_seed = derive_seed(sd, 3);
    CheckResult r;
    r.name = "variance_identity_ratio";
    try {
      const ExperimentResult res = run_experiment(cfg, workers);
      const CheckOutcome& c = res.checks.front();
      r.pass = c.pass;
      r.value = c.value;
      r.threshold = c.tolerance;
      r.detail = c.detail;
    } catch (const VerificationError& e) {
      r.pass = false;
      r.detail = e.what();
    }
    out.push_back(std::move(r));
  }

  return out;
}

}  // namespace lpp
