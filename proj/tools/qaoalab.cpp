#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qaoalab/experiments.hpp"
#include "qaoalab/reporting.hpp"

namespace {

namespace fs = std::filesystem;
using namespace qaoalab;

// Seed/node lists: comma-separated values, each either a number or an
// inclusive range "a..b" (e.g. "0..19" or "3,7,10..12").
std::vector<std::uint64_t> parse_number_list(const std::string& spec) {
  std::vector<std::uint64_t> values;
  std::stringstream stream(spec);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) throw ValidationError("list: empty entry in \"" + spec + "\"");
    const std::size_t dots = token.find("..");
    try {
      if (dots == std::string::npos) {
        values.push_back(std::stoull(token));
      } else {
        const std::uint64_t lo = std::stoull(token.substr(0, dots));
        const std::uint64_t hi = std::stoull(token.substr(dots + 2));
        if (hi < lo) throw ValidationError("list: descending range \"" + token + "\"");
        for (std::uint64_t v = lo; v <= hi; ++v) values.push_back(v);
      }
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError("list: cannot parse \"" + token + "\"");
    }
  }
  if (values.empty()) throw ValidationError("list: no values in \"" + spec + "\"");
  return values;
}

std::vector<int> parse_node_list(const std::string& spec) {
  std::vector<int> nodes;
  for (std::uint64_t v : parse_number_list(spec)) nodes.push_back(static_cast<int>(v));
  return nodes;
}

void check_qubit_budget(int n, int max_qubits) {
  if (n > max_qubits) {
    throw ValidationError("instance with " + std::to_string(n) +
                          " nodes exceeds --max-qubits " + std::to_string(max_qubits));
  }
}

QaoaParams load_params_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("params: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("params: " + path.string() + ": " + e.what());
  }
  const nlohmann::json& source = j.contains("params") ? j.at("params") : j;
  QaoaParams params;
  try {
    params.gammas = source.at("gammas").get<std::vector<double>>();
    params.betas = source.at("betas").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("params: " + path.string() + ": " + e.what());
  }
  params.validate();
  return params;
}

SignConvention convention_from_flag(const std::string& name) {
  if (name == "maxcut") return SignConvention::maxcut;
  if (name == "paper-literal" || name == "paper_literal") {
    return SignConvention::paper_literal;
  }
  throw ValidationError("unknown convention \"" + name + "\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA Max-Cut parameter-transfer laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed_offset = 0;
  std::string convention_flag = "maxcut";
  int max_qubits = kMaxQubits;
  app.add_option("--seed-offset", seed_offset,
                 "Shift every graph seed by this amount (fresh cohort, same code path)");
  app.add_option("--convention", convention_flag,
                 "Cost sign convention: maxcut or paper-literal")
      ->check(CLI::IsMember({"maxcut", "paper-literal", "paper_literal"}));
  app.add_option("--max-qubits", max_qubits,
                 "Refuse instances larger than this many nodes")
      ->check(CLI::Range(1, kMaxQubits));

  auto* gen = app.add_subcommand("gen-graphs", "Generate connected random instances");
  std::string gen_nodes = "6,8,10,12";
  std::string gen_seeds = "0..19";
  double gen_edge_prob = 0.6;
  bool gen_weighted = false;
  std::string gen_out = "graphs";
  gen->add_option("--nodes", gen_nodes, "Node counts, e.g. 6,8,10,12");
  gen->add_option("--seeds", gen_seeds, "Seeds, e.g. 0..19 or 3,5,9");
  gen->add_option("--edge-prob", gen_edge_prob, "Edge probability")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_flag("--weighted", gen_weighted, "Draw edge weights uniformly from (0, 1]");
  gen->add_option("--out", gen_out, "Output directory");

  auto* train = app.add_subcommand("train-donor", "Train one donor instance from scratch");
  int train_n = 8;
  std::uint64_t train_seed = 13;
  std::uint64_t train_init_seed = 505;
  int train_p = 5;
  double train_edge_prob = 0.6;
  bool train_weighted = false;
  int train_max_iterations = 1000;
  std::string train_out = "donors";
  train->add_option("--n-nodes", train_n, "Donor size")->check(CLI::Range(1, kMaxQubits));
  train->add_option("--seed", train_seed, "Graph seed");
  train->add_option("--init-seed", train_init_seed, "Seed for the initial angles");
  train->add_option("-p,--layers", train_p, "Circuit depth")->check(CLI::PositiveNumber);
  train->add_option("--edge-prob", train_edge_prob, "Edge probability")
      ->check(CLI::Range(0.0, 1.0));
  train->add_flag("--weighted", train_weighted, "Weighted donor instance");
  train->add_option("--max-iterations", train_max_iterations, "Optimizer iteration cap")
      ->check(CLI::PositiveNumber);
  train->add_option("--out", train_out, "Output directory");

  auto* run = app.add_subcommand("run", "Run a full transfer experiment batch");
  std::string run_config;
  std::string run_out = "runs/latest";
  int run_workers = 1;
  bool run_resume = false;
  run->add_option("--config", run_config, "Experiment config JSON (defaults when omitted)");
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--workers", run_workers, "Parallel workers")->check(CLI::PositiveNumber);
  run->add_flag("--resume", run_resume, "Reuse records already on disk");

  auto* grid = app.add_subcommand("grid-search", "Scan one layer's angle plane");
  std::string grid_graph;
  std::string grid_params;
  int grid_layer = 1;
  int grid_resolution = 64;
  std::string grid_out;
  grid->add_option("--graph", grid_graph, "Instance JSON file")->required();
  grid->add_option("--params", grid_params, "Angle source (donor file or params JSON)")
      ->required();
  grid->add_option("--layer", grid_layer, "Layer to scan (1-based)")
      ->check(CLI::PositiveNumber);
  grid->add_option("--resolution", grid_resolution, "Points per axis")
      ->check(CLI::PositiveNumber);
  grid->add_option("--out", grid_out, "Write the full surface to this JSON file");

  auto* report = app.add_subcommand("report", "Aggregate records into CSV tables and figures");
  std::string report_records = "runs/latest/records.jsonl";
  std::string report_out;
  report->add_option("--records", report_records, "records.jsonl produced by run");
  report->add_option("--out", report_out, "Output directory (default: records directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const SignConvention convention = convention_from_flag(convention_flag);

    if (gen->parsed()) {
      const std::vector<int> nodes = parse_node_list(gen_nodes);
      const std::vector<std::uint64_t> seeds = parse_number_list(gen_seeds);
      fs::create_directories(gen_out);
      int count = 0;
      for (int n : nodes) {
        check_qubit_budget(n, max_qubits);
        for (std::uint64_t seed : seeds) {
          const std::uint64_t shifted = seed + seed_offset;
          const Graph g = generate_erdos_renyi(n, gen_edge_prob, shifted, gen_weighted);
          save_graph(g, fs::path(gen_out) / graph_file_name(n, shifted));
          ++count;
        }
      }
      std::cout << "wrote " << count << " graphs to " << gen_out << "\n";
    } else if (train->parsed()) {
      check_qubit_budget(train_n, max_qubits);
      const std::uint64_t shifted = train_seed + seed_offset;
      const Graph g =
          generate_erdos_renyi(train_n, train_edge_prob, shifted, train_weighted);
      OptimizerConfig opt_config;
      opt_config.max_iterations = train_max_iterations;
      const TrainedDonor donor =
          train_donor(g, train_p, train_init_seed, opt_config, convention);
      fs::create_directories(train_out);
      save_graph(g, fs::path(train_out) / graph_file_name(train_n, shifted));
      nlohmann::json dj;
      dj["seed"] = shifted;
      dj["init_seed"] = train_init_seed;
      dj["n_nodes"] = train_n;
      dj["weighted"] = train_weighted;
      dj["e_min"] = donor.e_min;
      dj["r_final"] = donor.r_final;
      dj["tau"] = donor.trace.tau;
      dj["converged"] = donor.trace.converged;
      dj["params"] = {{"gammas", donor.params.gammas}, {"betas", donor.params.betas}};
      dj["costs"] = donor.trace.costs;
      const fs::path donor_path =
          fs::path(train_out) / ("donor_" + std::to_string(shifted) + ".json");
      std::ofstream out(donor_path);
      out << dj.dump(2) << "\n";
      std::cout << "donor seed " << shifted << ": r=" << format_float(donor.r_final)
                << " tau=" << donor.trace.tau
                << (donor.trace.converged ? " (converged)" : " (iteration cap)") << "\n"
                << "wrote " << donor_path.string() << "\n";
    } else if (run->parsed()) {
      ExperimentConfig config = run_config.empty() ? parse_experiment_config("{}")
                                                   : load_experiment_config(run_config);
      if (app.count("--convention") != 0) config.convention = convention;
      config.apply_seed_offset(seed_offset);
      for (int n : config.acceptor.node_counts) check_qubit_budget(n, max_qubits);
      for (const DonorConfig& d : config.donors) check_qubit_budget(d.n_nodes, max_qubits);
      BatchStats stats;
      const std::vector<RunRecord> records =
          run_batch(config, run_out, run_workers, run_resume, &stats);
      const std::vector<SchemeSummary> summaries = aggregate(records);
      write_csv(records, summaries, run_out);
      const std::vector<std::string> figures = render_figures(records, summaries, run_out);
      std::cout << "batch complete: " << stats.computed << " computed, " << stats.resumed
                << " resumed, " << stats.failed << " failed; " << records.size()
                << " records and " << figures.size() << " figures in " << run_out << "\n";
    } else if (grid->parsed()) {
      const Graph g = load_graph(grid_graph);
      check_qubit_budget(g.n_nodes, max_qubits);
      const QaoaParams params = load_params_file(grid_params);
      const EnergyTable table = build_energy_table(g, convention);
      const GridSearchResult result =
          grid_search_layer(table, params, grid_layer, grid_resolution);
      if (!grid_out.empty()) {
        nlohmann::json j;
        j["layer"] = result.layer;
        j["resolution"] = result.resolution;
        j["gamma_values"] = result.gamma_values;
        j["beta_values"] = result.beta_values;
        j["values"] = result.values;
        j["best_gamma"] = result.best_gamma;
        j["best_beta"] = result.best_beta;
        j["min_value"] = result.min_value;
        std::ofstream out(grid_out);
        if (!out) throw std::runtime_error("grid-search: cannot open " + grid_out);
        out << j.dump() << "\n";
      }
      std::cout << "layer " << result.layer << ": min " << format_float(result.min_value)
                << " at gamma=" << format_float(result.best_gamma)
                << " beta=" << format_float(result.best_beta) << "\n";
    } else if (report->parsed()) {
      const fs::path records_path = report_records;
      const std::vector<RunRecord> records = load_records_jsonl(records_path);
      const fs::path out_dir =
          report_out.empty() ? records_path.parent_path() : fs::path(report_out);
      const std::vector<SchemeSummary> summaries = aggregate(records);
      write_csv(records, summaries, out_dir);
      const std::vector<std::string> figures = render_figures(records, summaries, out_dir);
      std::cout << "wrote records.csv, summary.csv and " << figures.size()
                << " figures to " << out_dir.string() << "\n";
    }
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
