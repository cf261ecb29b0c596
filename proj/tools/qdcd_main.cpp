#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdcd/counterdiabatic.hpp"
#include "qdcd/experiment.hpp"
#include "qdcd/graph_io.hpp"
#include "qdcd/hamiltonians.hpp"
#include "qdcd/symmetry.hpp"

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::stringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

qdcd::Graph load_graph(const std::string& path, const std::string& format) {
  const std::string text = slurp(path);
  if (format == "edgelist") return qdcd::parse_edgelist(text);
  if (format != "graph6")
    throw std::runtime_error("unknown format '" + format + "'");
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r\n") != std::string::npos)
      return qdcd::parse_graph6(line);
  }
  throw std::runtime_error("no graph found in '" + path + "'");
}

qdcd::TermSum problem_cost(const qdcd::Graph& g, const std::string& problem,
                           int k, int d) {
  if (problem == "max3cut") return qdcd::maxkcut_hamiltonian(g, 3);
  if (problem == "maxkcut") return qdcd::maxkcut_hamiltonian(g, k);
  if (problem == "ising") return qdcd::ising_zz(g, d);
  throw std::runtime_error("unknown problem '" + problem + "'");
}

int cost_dimension(const std::string& problem, int k, int d) {
  if (problem == "max3cut") return 3;
  if (problem == "maxkcut") return k;
  return d;
}

int cmd_solve(const std::string& config_path, const std::string& output_override) {
  const auto j = nlohmann::json::parse(slurp(config_path));
  auto cfg = qdcd::ExperimentConfig::from_json(j);
  if (!output_override.empty()) cfg.output_dir = output_override;

  const auto t0 = std::chrono::steady_clock::now();
  const auto result = qdcd::run_experiment(cfg);
  const auto t1 = std::chrono::steady_clock::now();
  qdcd::metrics_and_emit(result, cfg.output_dir);

  const auto summary = qdcd::summary_json(result);
  std::cout << "problem: " << summary["config"]["problem"].get<std::string>()
            << "  ansatz: " << summary["config"]["ansatz"].get<std::string>()
            << "  layers: " << cfg.layers << "\n";
  std::cout << "ground energy: " << result.ground_energy
            << "  optimal states: " << result.optimal_state_count
            << "  random guess: " << result.random_guess_probability << "\n";
  std::cout << "pool: " << result.pool_size
            << "  grouped: " << result.grouped_pool_size
            << "  ansatz params: " << result.ansatz_params << "\n";
  for (const auto& rec : result.records) {
    std::cout << "run " << rec.run_id;
    if (rec.error) {
      std::cout << "  error: " << *rec.error << "\n";
      continue;
    }
    std::cout << "  energy " << rec.energy << "  ratio "
              << rec.approximation_ratio << "  p(success) "
              << rec.success_probability;
    if (rec.fidelity_value) std::cout << "  fidelity " << *rec.fidelity_value;
    std::cout << "\n";
  }
  if (summary["aggregate"].contains("formatted"))
    std::cout << summary["aggregate"]["metric"].get<std::string>() << ": "
              << summary["aggregate"]["formatted"].get<std::string>() << "\n";
  const double secs = std::chrono::duration<double>(t1 - t0).count();
  std::cout << "wall time: " << secs << " s\n";
  std::cout << "wrote " << cfg.output_dir << "/trace.csv and "
            << cfg.output_dir << "/summary.json\n";
  return 0;
}

int cmd_orbits(const std::string& path, const std::string& format) {
  const auto g = load_graph(path, format);
  const auto autos = qdcd::automorphism_group(g);
  const auto orb = qdcd::orbits(g, autos);
  std::cout << "vertices: " << g.n << "  edges: " << g.edges.size()
            << "  |Aut|: " << autos.size() << "\n";
  std::cout << "vertex orbits (" << orb.vertex_orbits.size() << "):\n";
  for (const auto& o : orb.vertex_orbits) {
    std::cout << " ";
    for (int v : o) std::cout << " " << v;
    std::cout << "\n";
  }
  std::cout << "edge orbits (" << orb.edge_orbits.size() << "):\n";
  for (const auto& o : orb.edge_orbits) {
    std::cout << " ";
    for (const auto& [u, v] : o) std::cout << " (" << u << "," << v << ")";
    std::cout << "\n";
  }
  std::cout << "arc orbits (" << orb.arc_orbits.size() << "):\n";
  for (const auto& o : orb.arc_orbits) {
    std::cout << " ";
    for (const auto& [u, v] : o) std::cout << " " << u << "->" << v;
    std::cout << "\n";
  }
  return 0;
}

int cmd_cdterms(const std::string& path, const std::string& format,
                const std::string& problem, int k, int d, double lambda,
                bool grouped) {
  const auto g = load_graph(path, format);
  const int dim = cost_dimension(problem, k, d);
  const auto hp = problem_cost(g, problem, k, dim);
  const auto h0 = qdcd::mixer(g.n, dim);
  const auto pool = qdcd::cd_pool(h0, hp);

  const qdcd::ParamGroupMap* groups_ptr = nullptr;
  qdcd::ParamGroupMap groups;
  if (grouped) {
    const auto autos = qdcd::automorphism_group(g);
    const auto orb = qdcd::orbits(g, autos);
    groups = qdcd::group_parameters(pool, g, orb);
    groups_ptr = &groups;
  }
  const auto coeffs = qdcd::cd_coefficients(pool, h0, hp, lambda, groups_ptr);

  std::cout << "pool size: " << pool.size();
  if (grouped) std::cout << "  groups: " << groups.n_groups;
  std::cout << "  lambda: " << lambda << "\n";
  for (size_t i = 0; i < pool.elements.size(); ++i) {
    const auto& el = pool.elements[i];
    std::cout << i << "  [" << el.support.str() << "]  " << el.family;
    if (grouped) std::cout << "  group " << groups.group_of[i];
    std::cout << "  alpha " << coeffs.alphas(static_cast<long>(i)) << "\n";
  }
  std::cout << "residual action: " << coeffs.action_value << "\n";
  return 0;
}

int cmd_stats(const std::string& path, const std::string& problem, int k, int d) {
  const auto graphs = qdcd::parse_graph6_lines(slurp(path));
  if (graphs.empty()) throw std::runtime_error("no graphs in '" + path + "'");
  double sum = 0.0;
  std::cout << "graph\tn\tedges\tpool\tgrouped\tratio\n";
  for (size_t i = 0; i < graphs.size(); ++i) {
    const auto& g = graphs[i];
    const int dim = cost_dimension(problem, k, d);
    const auto sizes =
        qdcd::pool_sizes(g, qdcd::mixer(g.n, dim), problem_cost(g, problem, k, dim));
    sum += sizes.ratio();
    std::cout << i << "\t" << g.n << "\t" << g.edges.size() << "\t"
              << sizes.total << "\t" << sizes.grouped << "\t" << sizes.ratio()
              << "\n";
  }
  std::cout << "mean ratio: " << sum / static_cast<double>(graphs.size()) << "\n";
  return 0;
}

int cmd_encode(const std::string& path) {
  const auto g = qdcd::parse_edgelist(slurp(path));
  std::cout << qdcd::encode_graph6(g) << "\n";
  return 0;
}

int cmd_decode(const std::string& path) {
  for (const auto& g : qdcd::parse_graph6_lines(slurp(path))) {
    std::cout << "# n = " << g.n << "\n" << qdcd::encode_edgelist(g);
  }
  return 0;
}

int cmd_gen(int n, const std::string& out_path) {
  const auto graphs = qdcd::enumerate_connected_graphs(n);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
    out = &file;
  }
  for (const auto& g : graphs) *out << qdcd::encode_graph6(g) << "\n";
  std::cerr << graphs.size() << " connected graphs on " << n << " vertices\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qudit counterdiabatic ansatz toolkit"};
  app.require_subcommand(1);

  std::string config_path, output_override;
  auto* solve = app.add_subcommand("solve", "run an experiment config");
  solve->add_option("--config", config_path, "experiment JSON config")
      ->required();
  solve->add_option("--output", output_override,
                    "override the config's output_dir");

  std::string graph_path, graph_format = "graph6";
  auto* orbits_cmd = app.add_subcommand("orbits", "graph symmetry orbits");
  orbits_cmd->add_option("--graph", graph_path, "graph file")->required();
  orbits_cmd->add_option("--format", graph_format, "graph6 or edgelist");

  std::string cd_graph, cd_format = "graph6", cd_problem = "max3cut";
  int cd_k = 3, cd_d = 3;
  double cd_lambda = 0.5;
  bool cd_grouped = false;
  auto* cdterms = app.add_subcommand("cdterms", "first-order pool and coefficients");
  cdterms->add_option("--graph", cd_graph, "graph file")->required();
  cdterms->add_option("--format", cd_format, "graph6 or edgelist");
  cdterms->add_option("--problem", cd_problem, "max3cut, maxkcut, or ising");
  cdterms->add_option("--k", cd_k, "maxkcut order");
  cdterms->add_option("--d", cd_d, "ising local dimension");
  cdterms->add_option("--lambda", cd_lambda, "schedule point in [0,1]");
  cdterms->add_flag("--grouped", cd_grouped, "group by symmetry orbits");

  std::string stats_path, stats_problem = "max3cut";
  int stats_k = 3, stats_d = 3;
  auto* stats = app.add_subcommand("stats", "parameter reduction over a graph list");
  stats->add_option("--graphs", stats_path, "file of graph6 lines")->required();
  stats->add_option("--problem", stats_problem, "max3cut, maxkcut, or ising");
  stats->add_option("--k", stats_k, "maxkcut order");
  stats->add_option("--d", stats_d, "ising local dimension");

  std::string enc_path = "-";
  auto* enc = app.add_subcommand("encode-graph6", "edge list to graph6");
  enc->add_option("--input", enc_path, "edge list file, '-' for stdin");

  std::string dec_path = "-";
  auto* dec = app.add_subcommand("decode-graph6", "graph6 to edge list");
  dec->add_option("--input", dec_path, "graph6 file, '-' for stdin");

  int gen_n = 5;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-graphs", "connected graphs up to isomorphism");
  gen->add_option("--n", gen_n, "vertex count (<= 7)")->required();
  gen->add_option("--output", gen_out, "output file, default stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(config_path, output_override);
    if (orbits_cmd->parsed()) return cmd_orbits(graph_path, graph_format);
    if (cdterms->parsed())
      return cmd_cdterms(cd_graph, cd_format, cd_problem, cd_k, cd_d, cd_lambda,
                         cd_grouped);
    if (stats->parsed()) return cmd_stats(stats_path, stats_problem, stats_k, stats_d);
    if (enc->parsed()) return cmd_encode(enc_path);
    if (dec->parsed()) return cmd_decode(dec_path);
    if (gen->parsed()) return cmd_gen(gen_n, gen_out);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
