#include "qdcd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qdcd/counterdiabatic.hpp"
#include "qdcd/graph_io.hpp"
#include "qdcd/hamiltonians.hpp"
#include "qdcd/symmetry.hpp"

namespace qdcd {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string problem_name(ProblemKind p) {
  switch (p) {
    case ProblemKind::Max3Cut: return "max3cut";
    case ProblemKind::MaxKCut: return "maxkcut";
    case ProblemKind::Ising: return "ising";
    case ProblemKind::WState: return "wstate";
  }
  throw std::logic_error("unknown problem kind");
}

ProblemKind problem_from(const std::string& s) {
  if (s == "max3cut") return ProblemKind::Max3Cut;
  if (s == "maxkcut") return ProblemKind::MaxKCut;
  if (s == "ising") return ProblemKind::Ising;
  if (s == "wstate") return ProblemKind::WState;
  throw std::invalid_argument("unknown problem '" + s + "'");
}

std::string ansatz_name(AnsatzKind a) {
  switch (a) {
    case AnsatzKind::Qaoa: return "qaoa";
    case AnsatzKind::Dcqaoa: return "dcqaoa";
    case AnsatzKind::DcqaoaGrouped: return "dcqaoa-grouped";
    case AnsatzKind::Cd: return "cd";
    case AnsatzKind::CdGrouped: return "cd-grouped";
    case AnsatzKind::TrotterAnneal: return "trotter-anneal";
  }
  throw std::logic_error("unknown ansatz kind");
}

AnsatzKind ansatz_from(const std::string& s) {
  if (s == "qaoa") return AnsatzKind::Qaoa;
  if (s == "dcqaoa") return AnsatzKind::Dcqaoa;
  if (s == "dcqaoa-grouped") return AnsatzKind::DcqaoaGrouped;
  if (s == "cd") return AnsatzKind::Cd;
  if (s == "cd-grouped") return AnsatzKind::CdGrouped;
  if (s == "trotter-anneal") return AnsatzKind::TrotterAnneal;
  throw std::invalid_argument("unknown ansatz '" + s + "'");
}

std::string objective_name(ObjectiveKind o) {
  return o == ObjectiveKind::Energy ? "energy" : "fidelity";
}

ObjectiveKind objective_from(const std::string& s) {
  if (s == "energy") return ObjectiveKind::Energy;
  if (s == "fidelity") return ObjectiveKind::Fidelity;
  throw std::invalid_argument("unknown objective '" + s + "'");
}

std::string method_name(OptMethod m) {
  return m == OptMethod::Cobyla ? "cobyla" : "nelder-mead";
}

OptMethod method_from(const std::string& s) {
  if (s == "cobyla") return OptMethod::Cobyla;
  if (s == "nelder-mead") return OptMethod::NelderMead;
  throw std::invalid_argument("unknown optimizer method '" + s + "'");
}

std::string schedule_name(Schedule::Kind k) {
  return k == Schedule::Kind::Linear ? "linear" : "sin2";
}

Schedule::Kind schedule_from(const std::string& s) {
  if (s == "linear") return Schedule::Kind::Linear;
  if (s == "sin2") return Schedule::Kind::SinSquared;
  throw std::invalid_argument("unknown schedule '" + s + "'");
}

Graph graph_from_json(const json& gj) {
  if (gj.contains("file")) {
    const auto path = gj.at("file").get<std::string>();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const auto fmt = gj.value("format", std::string("graph6"));
    if (fmt == "edgelist") return parse_edgelist(buf.str());
    if (fmt != "graph6")
      throw std::invalid_argument("unknown graph format '" + fmt + "'");
    // graph6 files may hold one graph per line; the config names one graph.
    std::string line;
    std::istringstream lines(buf.str());
    while (std::getline(lines, line)) {
      if (!line.empty() && line.find_first_not_of(" \t\r\n") != std::string::npos)
        return parse_graph6(line);
    }
    throw std::runtime_error("graph file '" + path + "' is empty");
  }
  if (!gj.contains("edges"))
    throw std::invalid_argument("graph needs either 'file' or 'edges'");
  std::vector<std::pair<int, int>> edges;
  int max_label = 0;
  for (const auto& e : gj.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("each edge must be a pair of vertex labels");
    const int u = e.at(0).get<int>();
    const int v = e.at(1).get<int>();
    if (u < 1 || v < 1)
      throw std::invalid_argument("config edges use 1-based vertex labels");
    edges.emplace_back(u - 1, v - 1);
    max_label = std::max({max_label, u, v});
  }
  const int n = gj.value("n", max_label);
  if (n < max_label)
    throw std::invalid_argument("graph 'n' smaller than the largest edge label");
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
  return Graph(n, edges);
}

/// Fills energy, ratio, success probability, and (for W-state targets) the
/// fidelity from a final state. The approximation ratio E / E0 uses the true
/// ground energy; our cost operators have E0 < 0 whenever an edge exists.
void fill_metrics(RunRecord& rec, const StateVector& psi, const TermSum& hp,
                  const GroundInfo& ground, const StateVector* target) {
  rec.energy = expectation(psi, hp);
  rec.approximation_ratio =
      ground.energy != 0.0 ? rec.energy / ground.energy : 1.0;
  if (ground.diagonal) {
    double p = 0.0;
    for (long s : ground.optimal_states) p += std::norm(psi.amplitudes(s));
    rec.success_probability = p;
  }
  if (target != nullptr) rec.fidelity_value = fidelity(psi, *target);
}

std::string format_two(double mean, double stddev) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f ± %.2f", mean, stddev);
  return buf;
}

// Best known polynomial-time approximation ratio for Max-3-Cut, quoted for
// comparison next to the quantum results on k = 3 cost functions.
constexpr double kClassicalMax3CutRatio = 0.800217;

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  c.problem = problem_from(j.at("problem").get<std::string>());

  switch (c.problem) {
    case ProblemKind::Max3Cut:
      c.k = 3;
      c.d = 3;
      break;
    case ProblemKind::MaxKCut:
      c.k = j.at("k").get<int>();
      if (c.k < 2) throw std::invalid_argument("maxkcut needs k >= 2");
      c.d = c.k;
      break;
    case ProblemKind::Ising:
      c.d = j.value("d", 3);
      if (c.d < 2) throw std::invalid_argument("ising needs d >= 2");
      break;
    case ProblemKind::WState:
      c.d = 3;
      break;
  }

  if (c.problem == ProblemKind::WState) {
    c.n = j.at("n").get<int>();
    if (c.n < 1) throw std::invalid_argument("wstate needs n >= 1");
    c.graph = Graph::complete(c.n);
  } else {
    c.graph = graph_from_json(j.at("graph"));
    c.n = c.graph.n;
  }

  c.ansatz = ansatz_from(j.value("ansatz", std::string("cd-grouped")));
  c.layers = j.value("layers", 1);
  if (c.layers < 1) throw std::invalid_argument("layers must be >= 1");

  c.objective = objective_from(j.value("objective", std::string("energy")));
  if (c.objective == ObjectiveKind::Fidelity && c.problem != ProblemKind::WState)
    throw std::invalid_argument("fidelity objective needs a wstate problem");

  if (j.contains("optimizer")) {
    const auto& oj = j.at("optimizer");
    c.optimizer.max_iterations = oj.value("max_iterations", 500);
    c.optimizer.initial_step = oj.value("initial_step", 0.5);
    c.optimizer.tolerance = oj.value("tolerance", 1e-6);
    c.optimizer.seed = oj.value("seed", uint64_t{0});
    c.optimizer.method =
        method_from(oj.value("method", std::string("cobyla")));
  }

  c.restarts = j.value("restarts", 1);
  if (c.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  c.output_dir = j.value("output_dir", std::string("out"));

  if (j.contains("schedule")) {
    const auto& sj = j.at("schedule");
    c.schedule.kind = schedule_from(sj.value("kind", std::string("sin2")));
    c.schedule.total_time = sj.value("total_time", 10.0);
    if (c.schedule.total_time <= 0.0)
      throw std::invalid_argument("schedule total_time must be positive");
  }
  c.trotter_steps = j.value("trotter_steps", 100);
  if (c.trotter_steps < 1)
    throw std::invalid_argument("trotter_steps must be >= 1");

  return c;
}

ordered_json ExperimentConfig::to_json() const {
  ordered_json j;
  j["problem"] = problem_name(problem);
  if (problem == ProblemKind::Max3Cut || problem == ProblemKind::MaxKCut)
    j["k"] = k;
  j["d"] = d;
  j["n"] = n;
  ordered_json edges = ordered_json::array();
  for (const auto& [u, v] : graph.edges)
    edges.push_back(ordered_json::array({u + 1, v + 1}));
  j["graph"] = ordered_json{{"n", graph.n}, {"edges", edges}};
  j["ansatz"] = ansatz_name(ansatz);
  j["layers"] = layers;
  j["objective"] = objective_name(objective);
  j["optimizer"] = ordered_json{{"method", method_name(optimizer.method)},
                                {"max_iterations", optimizer.max_iterations},
                                {"initial_step", optimizer.initial_step},
                                {"tolerance", optimizer.tolerance},
                                {"seed", optimizer.seed}};
  j["restarts"] = restarts;
  j["output_dir"] = output_dir;
  if (ansatz == AnsatzKind::TrotterAnneal) {
    j["schedule"] = ordered_json{{"kind", schedule_name(schedule.kind)},
                                 {"total_time", schedule.total_time}};
    j["trotter_steps"] = trotter_steps;
  }
  return j;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.config = cfg;

  const int n = cfg.graph.n;
  const int d = cfg.d;

  TermSum hp = [&] {
    switch (cfg.problem) {
      case ProblemKind::Max3Cut:
      case ProblemKind::MaxKCut:
        return maxkcut_hamiltonian(cfg.graph, cfg.k);
      case ProblemKind::Ising:
        return ising_zz(cfg.graph, d);
      case ProblemKind::WState:
        return dicke_hamiltonian(n, 1, d);
    }
    throw std::logic_error("unknown problem kind");
  }();
  TermSum h0 = mixer(n, d);

  const GroundInfo ground = exact_ground(hp);
  res.ground_energy = ground.energy;
  res.optimal_state_count =
      ground.diagonal ? static_cast<long>(ground.optimal_states.size()) : 0;
  res.random_guess_probability =
      ground.diagonal
          ? static_cast<double>(res.optimal_state_count) / static_cast<double>(hp.dim())
          : 0.0;

  const bool needs_pool = cfg.ansatz != AnsatzKind::Qaoa;
  const bool grouped = cfg.ansatz == AnsatzKind::DcqaoaGrouped ||
                       cfg.ansatz == AnsatzKind::CdGrouped;
  CDPool pool;
  ParamGroupMap groups;
  if (needs_pool) pool = cd_pool(h0, hp);
  if (grouped) {
    const auto autos = automorphism_group(cfg.graph);
    const auto orb = orbits(cfg.graph, autos);
    groups = group_parameters(pool, cfg.graph, orb);
  }
  res.pool_size = static_cast<int>(pool.size());
  res.grouped_pool_size =
      grouped ? groups.n_groups : static_cast<int>(pool.size());

  const StateVector psi0 = initial_state(n, d);
  std::optional<StateVector> target;
  if (cfg.problem == ProblemKind::WState) target = w_state(n);
  const StateVector* target_ptr = target ? &*target : nullptr;

  if (cfg.ansatz == AnsatzKind::TrotterAnneal) {
    const AlphaFn alphas = [&](double lambda) {
      return cd_coefficients(pool, h0, hp, lambda);
    };
    const StateVector psi = trotter_evolve(h0, hp, pool, alphas, cfg.schedule,
                                           cfg.trotter_steps, psi0);
    RunRecord rec;
    rec.run_id = 0;
    rec.seed = cfg.optimizer.seed;
    fill_metrics(rec, psi, hp, ground, target_ptr);
    res.records.push_back(std::move(rec));
    res.best_index = 0;
    return res;
  }

  Ansatz a = [&] {
    switch (cfg.ansatz) {
      case AnsatzKind::Qaoa:
        return build_qaoa(h0, hp, cfg.layers);
      case AnsatzKind::Dcqaoa:
        return build_dcqaoa(h0, hp, pool, cfg.layers);
      case AnsatzKind::DcqaoaGrouped:
        return build_dcqaoa(h0, hp, pool, cfg.layers, &groups);
      case AnsatzKind::Cd:
        return build_cd_ansatz(pool, cfg.layers);
      case AnsatzKind::CdGrouped:
        return build_cd_ansatz(pool, cfg.layers, &groups);
      default:
        throw std::logic_error("unhandled ansatz kind");
    }
  }();
  res.ansatz_params = a.n_params;

  const Objective f = [&](const Eigen::VectorXd& theta) {
    const StateVector psi = bind_evolve(a, theta, psi0);
    if (cfg.objective == ObjectiveKind::Fidelity)
      return -fidelity(psi, *target);
    return expectation(psi, hp);
  };

  const MultistartResult ms =
      multistart(f, a.n_params, cfg.restarts, a.init_range, cfg.optimizer);
  res.best_index = ms.best_index;
  for (const OptRun& run : ms.runs) {
    RunRecord rec;
    rec.run_id = run.run_id;
    rec.seed = run.seed;
    rec.trace = run.trace;
    rec.final_params = run.x;
    rec.wall_ms = run.wall_ms;
    rec.error = run.error;
    if (!run.error) {
      const StateVector psi = bind_evolve(a, run.x, psi0);
      fill_metrics(rec, psi, hp, ground, target_ptr);
    }
    res.records.push_back(std::move(rec));
  }
  return res;
}

ordered_json summary_json(const ExperimentResult& result) {
  const ExperimentConfig& cfg = result.config;
  ordered_json j;
  j["config"] = cfg.to_json();

  ordered_json prob;
  prob["ground_energy"] = result.ground_energy;
  prob["optimal_state_count"] = result.optimal_state_count;
  prob["random_guess_probability"] = result.random_guess_probability;
  if (cfg.problem == ProblemKind::Max3Cut ||
      (cfg.problem == ProblemKind::MaxKCut && cfg.k == 3))
    prob["classical_reference_ratio"] = kClassicalMax3CutRatio;
  j["problem"] = prob;

  j["parameters"] = ordered_json{{"pool_size", result.pool_size},
                                 {"grouped_pool_size", result.grouped_pool_size},
                                 {"ansatz_params", result.ansatz_params}};

  const bool use_fidelity = cfg.objective == ObjectiveKind::Fidelity;
  ordered_json runs = ordered_json::array();
  std::vector<double> metric;
  for (const RunRecord& rec : result.records) {
    ordered_json rj;
    rj["run_id"] = rec.run_id;
    rj["seed"] = rec.seed;
    if (rec.error) {
      rj["error"] = *rec.error;
      runs.push_back(std::move(rj));
      continue;
    }
    rj["iterations"] = static_cast<int>(rec.trace.size());
    rj["energy"] = rec.energy;
    rj["approximation_ratio"] = rec.approximation_ratio;
    rj["success_probability"] = rec.success_probability;
    if (rec.fidelity_value) rj["fidelity"] = *rec.fidelity_value;
    ordered_json params = ordered_json::array();
    for (long i = 0; i < rec.final_params.size(); ++i)
      params.push_back(rec.final_params(i));
    rj["final_params"] = std::move(params);
    runs.push_back(std::move(rj));
    metric.push_back(use_fidelity && rec.fidelity_value
                         ? *rec.fidelity_value
                         : rec.approximation_ratio);
  }
  j["runs"] = std::move(runs);

  ordered_json agg;
  agg["metric"] = use_fidelity ? "fidelity" : "approximation_ratio";
  if (!metric.empty()) {
    std::vector<double> sorted = metric;
    std::sort(sorted.begin(), sorted.end());
    const double mean =
        std::accumulate(sorted.begin(), sorted.end(), 0.0) / sorted.size();
    double var = 0.0;
    for (double v : sorted) var += (v - mean) * (v - mean);
    const double stddev =
        sorted.size() > 1 ? std::sqrt(var / (sorted.size() - 1)) : 0.0;
    const auto quant = [&](double q) {
      const double pos = q * (sorted.size() - 1);
      const size_t lo = static_cast<size_t>(pos);
      const size_t hi = std::min(lo + 1, sorted.size() - 1);
      return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
    };
    agg["mean"] = mean;
    agg["std"] = stddev;
    agg["median"] = quant(0.5);
    agg["iqr"] = ordered_json::array({quant(0.25), quant(0.75)});
    agg["best"] = sorted.back();
    agg["formatted"] = format_two(mean, stddev);
  }
  j["aggregate"] = std::move(agg);
  return j;
}

std::string trace_csv(const ExperimentResult& result) {
  std::string out = "run_id,iteration,objective,best_objective\n";
  char buf[128];
  for (const RunRecord& rec : result.records) {
    for (const TracePoint& p : rec.trace) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g\n", rec.run_id,
                    p.iteration, p.objective, p.best);
      out += buf;
    }
  }
  return out;
}

void metrics_and_emit(const ExperimentResult& result, const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  {
    std::ofstream out(std::filesystem::path(outdir) / "trace.csv",
                      std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace.csv in " + outdir);
    out << trace_csv(result);
  }
  {
    std::ofstream out(std::filesystem::path(outdir) / "summary.json",
                      std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary.json in " + outdir);
    out << summary_json(result).dump(2) << "\n";
  }
}

}  // namespace qdcd
