#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qdcd/ansatz.hpp"
#include "qdcd/graph.hpp"
#include "qdcd/optimize.hpp"

namespace qdcd {

enum class ProblemKind { Max3Cut, MaxKCut, Ising, WState };
enum class AnsatzKind { Qaoa, Dcqaoa, DcqaoaGrouped, Cd, CdGrouped, TrotterAnneal };
enum class ObjectiveKind { Energy, Fidelity };

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Max3Cut;
  int k = 3;  // Max-k-Cut order (d = k)
  int d = 3;  // Ising local dimension
  int n = 0;  // W-state size (graph is implicit K_n)
  Graph graph;
  AnsatzKind ansatz = AnsatzKind::CdGrouped;
  int layers = 1;
  ObjectiveKind objective = ObjectiveKind::Energy;
  OptimizerConfig optimizer;
  int restarts = 1;
  std::string output_dir = "out";
  Schedule schedule{Schedule::Kind::SinSquared, 10.0};
  int trotter_steps = 100;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;  // canonical snapshot
};

/// Per-restart outcome with final-state metrics. Wall time is kept in memory
/// for reporting but never written to summary.json, which must be
/// byte-identical across reruns with the same seeds.
struct RunRecord {
  int run_id = 0;
  uint64_t seed = 0;
  Trace trace;
  Eigen::VectorXd final_params;
  double energy = 0.0;
  double approximation_ratio = 0.0;
  double success_probability = 0.0;
  std::optional<double> fidelity_value;
  double wall_ms = 0.0;
  std::optional<std::string> error;
};

struct ExperimentResult {
  ExperimentConfig config;
  double ground_energy = 0.0;
  long optimal_state_count = 0;
  double random_guess_probability = 0.0;
  int pool_size = 0;
  int grouped_pool_size = 0;
  int ansatz_params = 0;
  int best_index = -1;
  std::vector<RunRecord> records;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

nlohmann::ordered_json summary_json(const ExperimentResult& result);
std::string trace_csv(const ExperimentResult& result);

/// Writes trace.csv and summary.json into outdir (created if absent).
void metrics_and_emit(const ExperimentResult& result, const std::string& outdir);

}  // namespace qdcd
