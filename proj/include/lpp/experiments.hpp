#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lpp/busemann.hpp"
#include "lpp/stats.hpp"

// Monte Carlo estimators for the coalescence, exit-time, and fluctuation
// events, the variance identity and auxiliary bound checks, scaling fits
// on the resulting estimates, and the deterministic replica-parallel
// harness they all share.

namespace lpp {

enum class Experiment {
  CoalSlow,
  CoalFast,
  CoalCorner,
  ExitTail,
  ExitSmall,
  Fluctuation,
  VarianceIdentity,
  RwBound,
  RadonNikodym,
  DualityCheck,
};

const char* experiment_name(Experiment e);
// Returns false when the name is unknown.
bool experiment_from_name(const std::string& name, Experiment& out);

struct ExperimentConfig {
  Experiment experiment = Experiment::CoalSlow;
  double rho = 0.5;
  std::int64_t N = 100;
  // Primary parameter grid: delta (CoalSlow, CoalCorner, ExitSmall,
  // Fluctuation), r (CoalFast, ExitTail), separation factor (DualityCheck),
  // or chain length n (RwBound, RadonNikodym). Processed in ascending order.
  std::vector<double> grid;
  // Secondary grid: r values for CoalCorner, b values for ExitTail's shifted
  // endpoints. Empty means the secondary part is skipped.
  std::vector<double> aux_grid;
  std::int64_t replicas = 1;
  std::uint64_t master_seed = 1;
  double far_multiplier = 4.0;
  double alpha = 2.0;    // RwBound: rate of the positive exponential
  double beta = 1.0;     // RwBound: rate of the negative exponential
  double lambda = 0.75;  // RadonNikodym: tilted rate
};

struct EstimateRecord {
  std::string experiment;
  double rho = 0.0;
  std::int64_t N = 0;
  std::string param_name;
  double param_value = 0.0;
  std::int64_t replicas = 0;
  std::int64_t hits = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t master_seed = 0;
  double far_multiplier = 0.0;
  // Pinned to zero so that reruns diff cleanly; timings live in the manifest.
  double wall_time_s = 0.0;
};

struct ScalingFit {
  enum class Transform { LogLog, LogVsR3 };

  Transform transform = Transform::LogLog;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::int64_t excluded = 0;  // records dropped for p_hat in {0, 1}
};

const char* transform_name(ScalingFit::Transform t);

struct CheckOutcome {
  std::string name;
  bool pass = true;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ExperimentResult {
  std::vector<EstimateRecord> records;
  std::vector<ScalingFit> fits;
  std::vector<CheckOutcome> checks;
};

// Throws HypothesisError naming the violated hypothesis, or CapacityError
// when the required tables exceed the cell budget.
void validate_config(const ExperimentConfig& cfg);

// Runs the configured experiment. Hit counts depend only on (config,
// master_seed): replicas use independent streams and the reduction is ordered
// by replica index, so results are worker-count invariant. Per-realization
// invariants (grid monotonicity under shared weights, duality event equality)
// throw VerificationError when violated.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers);

// LogLog: ln(p_hat) against ln(param); LogVsR3: -ln(p_hat) against param^3.
// Records with p_hat in {0, 1} are excluded; fewer than 3 usable points
// throws InsufficientDataError.
ScalingFit fit_scaling(const std::vector<EstimateRecord>& records,
                       ScalingFit::Transform transform);

// Replica-parallel loop: runs body(replica) for every index, captures the
// first thrown exception by replica order and rethrows it after the loop.
// workers <= 0 uses the hardware default.
void run_replicas(std::int64_t replicas, int workers,
                  const std::function<void(std::int64_t)>& body);

}  // namespace lpp
