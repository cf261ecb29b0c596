#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qdcd {

using Objective = std::function<double(const Eigen::VectorXd&)>;

enum class OptMethod { Cobyla, NelderMead };

struct OptimizerConfig {
  int max_iterations = 500;   // exactly one objective evaluation each
  double initial_step = 0.5;  // initial trust radius
  double tolerance = 1e-6;    // final trust radius
  uint64_t seed = 0;
  OptMethod method = OptMethod::Cobyla;
};

struct TracePoint {
  int iteration = 0;   // 1-based evaluation index
  double objective = 0.0;
  double best = 0.0;   // incumbent, nonincreasing
};
using Trace = std::vector<TracePoint>;

struct MinimizeResult {
  Eigen::VectorXd x;
  double f = 0.0;
  Trace trace;
};

/// Derivative-free local minimization with COBYLA semantics: a simplex of
/// n+1 points carries a linear interpolation model; candidate steps go
/// distance delta along the descent direction of the model, delta adapts to
/// success/failure, and the trust radius rho shrinks from initial_step
/// toward tolerance, rebuilding the simplex at the new scale. Exactly one
/// objective evaluation per recorded iteration; evaluation budget is
/// cfg.max_iterations. Non-finite objective values abort with a diagnostic.
MinimizeResult minimize(const Objective& f, const Eigen::VectorXd& x0,
                        const OptimizerConfig& cfg);

struct OptRun {
  int run_id = 0;
  uint64_t seed = 0;
  Eigen::VectorXd x0;
  Eigen::VectorXd x;
  double f = 0.0;
  Trace trace;
  double wall_ms = 0.0;
  std::optional<std::string> error;
};

struct MultistartResult {
  std::vector<OptRun> runs;
  int best_index = -1;
  // Aggregates of final objective values over successful runs.
  double mean = 0.0;
  double stddev = 0.0;
  double median = 0.0;
  double iqr_low = 0.0;
  double iqr_high = 0.0;
};

/// Independent restarts from seeded uniform-random starts inside init_range
/// (one (lo, hi) pair per parameter). Restart r draws its own generator seed
/// from a splitmix64 chain over cfg.seed, so records are bit-reproducible.
/// A failing run is recorded with its error and does not abort siblings.
MultistartResult multistart(const Objective& f, int n_params, int restarts,
                            const std::vector<std::pair<double, double>>& init_range,
                            const OptimizerConfig& cfg);

/// Deterministic uniform double in [0, 1) from raw engine bits; used instead
/// of std::uniform_real_distribution, whose output is implementation-defined.
double uniform01(uint64_t bits);

uint64_t splitmix64(uint64_t& state);

}  // namespace qdcd
