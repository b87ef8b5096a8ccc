#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Named verification suites: exact combinatorial identities on coupled
// realizations, distributional checks for stationarity and Busemann
// marginals, step-distribution duality, far-target stabilization, and the
// auxiliary bounds. Each entry reports the measured value next to the
// threshold it was compared against.

namespace lpp {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

// Exact per-realization identities at sizes 50 and 200: shifted-base
// increment ordering, nested-geodesic agreement, exit-time equivalence,
// edge additivity, step duality with the literal edge-crossing test, dual
// geodesic restriction, stationary-process consistency, and duality event
// equality. value is the violation count; every threshold is zero.
std::vector<CheckResult> run_exact_lemma_suite(std::int64_t realizations,
                                               std::uint64_t seed, int workers);

// Boundary increments along a down-right staircase: means, marginal KS
// distances, and pooled lag-1 autocorrelation.
std::vector<CheckResult> run_stationarity_check(std::uint64_t seed, int workers);

// Marginals of horizontal and vertical Busemann edges and of the dual
// weight, one independent sample per replica.
std::vector<CheckResult> run_busemann_marginals_check(std::uint64_t seed,
                                                      int workers,
                                                      double far_multiplier);

// Two-sample KS between the primal geodesic's e1 step fraction and the dual
// geodesic's -e1 step fraction over disjoint replica ranges.
std::vector<CheckResult> run_step_distribution_check(std::uint64_t seed,
                                                     int workers);

// Step-decision agreement between windows built over the same weights with
// far targets at multipliers 4 and 8.
std::vector<CheckResult> run_stabilization_check(std::uint64_t seed, int workers);

// Tilted second-moment identity, random-walk prefix bound, and the variance
// identity at desk scale.
std::vector<CheckResult> run_bounds_suite(std::uint64_t seed, int workers);

}  // namespace lpp
