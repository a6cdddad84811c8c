#include "qaoalab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "qaoalab/rng.hpp"

namespace qaoalab {

namespace {

using nlohmann::json;

constexpr double kPi = std::numbers::pi;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
}

void require_known_keys(const json& j, std::initializer_list<const char*> allowed,
                        const std::string& where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw ValidationError(where + ": unknown key \"" + item.key() + "\"");
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(where + ": bad value for \"" + key + "\": " + e.what());
  }
}

}  // namespace

std::string scheme_kind_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::self_opt: return "self_opt";
    case SchemeKind::full_transfer: return "full_transfer";
    case SchemeKind::k_layer: return "k_layer";
    case SchemeKind::all_layer: return "all_layer";
  }
  throw ValidationError("scheme: unknown kind");
}

SchemeKind scheme_kind_from_name(const std::string& name) {
  if (name == "self_opt") return SchemeKind::self_opt;
  if (name == "full_transfer") return SchemeKind::full_transfer;
  if (name == "k_layer") return SchemeKind::k_layer;
  if (name == "all_layer") return SchemeKind::all_layer;
  throw ValidationError("scheme: unknown kind \"" + name + "\"");
}

void SchemeSpec::validate(int p) const {
  if (kind == SchemeKind::k_layer) {
    LayerMask mask{free_layers};
    mask.validate(p);
    if (static_cast<int>(free_layers.size()) >= p) {
      throw ValidationError(
          "scheme: k_layer must free a proper subset of the layers; "
          "use all_layer to train every layer");
    }
  } else if (!free_layers.empty()) {
    throw ValidationError("scheme: free_layers only applies to k_layer");
  }
}

LayerMask SchemeSpec::mask(int p) const {
  switch (kind) {
    case SchemeKind::full_transfer:
      throw ValidationError("scheme: full_transfer has no optimization mask");
    case SchemeKind::k_layer: {
      LayerMask mask{free_layers};
      mask.validate(p);
      return mask;
    }
    case SchemeKind::self_opt:
    case SchemeKind::all_layer:
      return LayerMask::all_layers(p);
  }
  throw ValidationError("scheme: unknown kind");
}

std::string free_layers_string(const std::set<int>& layers) {
  std::string out;
  for (int layer : layers) {
    if (!out.empty()) out += '|';
    out += std::to_string(layer);
  }
  return out;
}

std::set<int> parse_free_layers(const std::string& text) {
  std::set<int> layers;
  if (text.empty()) return layers;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, '|')) {
    try {
      layers.insert(std::stoi(part));
    } catch (const std::exception&) {
      throw ValidationError("free_layers: cannot parse \"" + text + "\"");
    }
  }
  return layers;
}

void ExperimentConfig::validate() const {
  if (p < 1) throw ValidationError("config: p must be at least 1");
  if (donors.empty()) throw ValidationError("config: at least one donor required");
  std::set<std::uint64_t> donor_seeds;
  for (const DonorConfig& d : donors) {
    if (d.n_nodes < 1 || d.n_nodes > kMaxQubits) {
      throw ValidationError("config: donor n_nodes outside [1, " +
                            std::to_string(kMaxQubits) + "]");
    }
    if (!donor_seeds.insert(d.seed).second) {
      throw ValidationError("config: duplicate donor seed " + std::to_string(d.seed));
    }
  }
  if (acceptor.node_counts.empty()) {
    throw ValidationError("config: acceptor.node_counts must be non-empty");
  }
  std::set<int> counts;
  for (int n : acceptor.node_counts) {
    if (n < 1 || n > kMaxQubits) {
      throw ValidationError("config: acceptor node count outside [1, " +
                            std::to_string(kMaxQubits) + "]");
    }
    if (!counts.insert(n).second) {
      throw ValidationError("config: duplicate acceptor node count " + std::to_string(n));
    }
  }
  if (acceptor.seeds.empty()) throw ValidationError("config: acceptor.seeds must be non-empty");
  std::set<std::uint64_t> seeds;
  for (std::uint64_t s : acceptor.seeds) {
    if (!seeds.insert(s).second) {
      throw ValidationError("config: duplicate acceptor seed " + std::to_string(s));
    }
  }
  if (!(acceptor.edge_prob >= 0.0 && acceptor.edge_prob <= 1.0)) {
    throw ValidationError("config: edge_prob must lie in [0, 1]");
  }
  if (schemes.empty()) throw ValidationError("config: at least one scheme required");
  std::set<std::string> scheme_ids;
  for (const SchemeSpec& s : schemes) {
    s.validate(p);
    const std::string id = scheme_kind_name(s.kind) + ":" + free_layers_string(s.free_layers);
    if (!scheme_ids.insert(id).second) {
      throw ValidationError("config: duplicate scheme " + id);
    }
  }
  optimizer.validate();
}

void ExperimentConfig::apply_seed_offset(std::uint64_t offset) {
  for (DonorConfig& d : donors) d.seed += offset;
  for (std::uint64_t& s : acceptor.seeds) s += offset;
}

namespace {

std::vector<DonorConfig> default_donors() {
  return {DonorConfig{8, 13, 505, std::nullopt}, DonorConfig{8, 5, 606, std::nullopt}};
}

std::vector<SchemeSpec> default_schemes() {
  return {
      SchemeSpec{SchemeKind::full_transfer, {}},
      SchemeSpec{SchemeKind::k_layer, {2}},
      SchemeSpec{SchemeKind::k_layer, {1, 2}},
      SchemeSpec{SchemeKind::k_layer, {1, 2, 3}},
      SchemeSpec{SchemeKind::all_layer, {}},
  };
}

std::vector<std::uint64_t> default_acceptor_seeds() {
  std::vector<std::uint64_t> seeds(20);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
  return seeds;
}

SignConvention convention_from_name(std::string name) {
  for (char& ch : name) {
    if (ch == '-') ch = '_';
  }
  if (name == "maxcut") return SignConvention::maxcut;
  if (name == "paper_literal") return SignConvention::paper_literal;
  throw ValidationError("config: unknown convention \"" + name + "\"");
}

std::string convention_name(SignConvention convention) {
  return convention == SignConvention::maxcut ? "maxcut" : "paper_literal";
}

DonorConfig parse_donor(const json& j) {
  const std::string where = "config.donors";
  require_object(j, where);
  require_known_keys(j, {"n_nodes", "seed", "init_seed", "weighted"}, where);
  DonorConfig d;
  d.n_nodes = get_or<int>(j, "n_nodes", d.n_nodes, where);
  d.seed = get_or<std::uint64_t>(j, "seed", d.seed, where);
  d.init_seed = get_or<std::uint64_t>(j, "init_seed", d.init_seed, where);
  if (j.contains("weighted")) d.weighted = get_or<bool>(j, "weighted", false, where);
  return d;
}

SchemeSpec parse_scheme(const json& j) {
  const std::string where = "config.schemes";
  SchemeSpec s;
  if (j.is_string()) {
    s.kind = scheme_kind_from_name(j.get<std::string>());
    return s;
  }
  require_object(j, where);
  require_known_keys(j, {"kind", "free_layers"}, where);
  if (!j.contains("kind")) throw ValidationError(where + ": \"kind\" is required");
  s.kind = scheme_kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("free_layers")) {
    try {
      for (const auto& layer : j.at("free_layers")) s.free_layers.insert(layer.get<int>());
    } catch (const json::exception& e) {
      throw ValidationError(where + ": bad free_layers: " + e.what());
    }
  }
  return s;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  require_object(j, "config");
  require_known_keys(j, {"p", "convention", "donors", "acceptor", "schemes", "optimizer"},
                     "config");

  ExperimentConfig c;
  c.donors = default_donors();
  c.acceptor.seeds = default_acceptor_seeds();
  c.schemes = default_schemes();

  c.p = get_or<int>(j, "p", c.p, "config");
  if (j.contains("convention")) {
    c.convention = convention_from_name(j.at("convention").get<std::string>());
  }
  if (j.contains("donors")) {
    if (!j.at("donors").is_array()) throw ValidationError("config: donors must be an array");
    c.donors.clear();
    for (const auto& item : j.at("donors")) c.donors.push_back(parse_donor(item));
  }
  if (j.contains("acceptor")) {
    const json& a = j.at("acceptor");
    const std::string where = "config.acceptor";
    require_object(a, where);
    require_known_keys(a, {"node_counts", "seeds", "edge_prob", "weighted"}, where);
    c.acceptor.node_counts =
        get_or<std::vector<int>>(a, "node_counts", c.acceptor.node_counts, where);
    c.acceptor.seeds =
        get_or<std::vector<std::uint64_t>>(a, "seeds", c.acceptor.seeds, where);
    c.acceptor.edge_prob = get_or<double>(a, "edge_prob", c.acceptor.edge_prob, where);
    c.acceptor.weighted = get_or<bool>(a, "weighted", c.acceptor.weighted, where);
  }
  if (j.contains("schemes")) {
    if (!j.at("schemes").is_array()) throw ValidationError("config: schemes must be an array");
    c.schemes.clear();
    for (const auto& item : j.at("schemes")) c.schemes.push_back(parse_scheme(item));
  }
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    const std::string where = "config.optimizer";
    require_object(o, where);
    require_known_keys(o,
                       {"learning_rate", "epsilon", "convergence_threshold",
                        "convergence_window", "max_iterations"},
                       where);
    c.optimizer.learning_rate =
        get_or<double>(o, "learning_rate", c.optimizer.learning_rate, where);
    c.optimizer.epsilon = get_or<double>(o, "epsilon", c.optimizer.epsilon, where);
    c.optimizer.convergence_threshold = get_or<double>(
        o, "convergence_threshold", c.optimizer.convergence_threshold, where);
    c.optimizer.convergence_window =
        get_or<int>(o, "convergence_window", c.optimizer.convergence_window, where);
    c.optimizer.max_iterations =
        get_or<int>(o, "max_iterations", c.optimizer.max_iterations, where);
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
  json j;
  j["p"] = config.p;
  j["convention"] = convention_name(config.convention);
  json donors = json::array();
  for (const DonorConfig& d : config.donors) {
    json dj;
    dj["n_nodes"] = d.n_nodes;
    dj["seed"] = d.seed;
    dj["init_seed"] = d.init_seed;
    if (d.weighted.has_value()) dj["weighted"] = *d.weighted;
    donors.push_back(std::move(dj));
  }
  j["donors"] = std::move(donors);
  j["acceptor"] = {{"node_counts", config.acceptor.node_counts},
                   {"seeds", config.acceptor.seeds},
                   {"edge_prob", config.acceptor.edge_prob},
                   {"weighted", config.acceptor.weighted}};
  json schemes = json::array();
  for (const SchemeSpec& s : config.schemes) {
    json sj;
    sj["kind"] = scheme_kind_name(s.kind);
    if (!s.free_layers.empty()) sj["free_layers"] = s.free_layers;
    schemes.push_back(std::move(sj));
  }
  j["schemes"] = std::move(schemes);
  j["optimizer"] = {{"learning_rate", config.optimizer.learning_rate},
                    {"epsilon", config.optimizer.epsilon},
                    {"convergence_threshold", config.optimizer.convergence_threshold},
                    {"convergence_window", config.optimizer.convergence_window},
                    {"max_iterations", config.optimizer.max_iterations}};
  return j.dump(2) + "\n";
}

QaoaParams random_params(int p, std::uint64_t seed) {
  if (p < 1) throw ValidationError("random_params: p must be at least 1");
  SplitMix64 rng(seed);
  QaoaParams params;
  params.gammas.reserve(p);
  params.betas.reserve(p);
  for (int k = 0; k < p; ++k) params.gammas.push_back(rng.next_in(-kPi, kPi));
  for (int k = 0; k < p; ++k) params.betas.push_back(rng.next_in(-kPi / 2.0, kPi / 2.0));
  return params;
}

std::string RunRecord::key() const {
  std::ostringstream out;
  out << donor_seed << ':' << acceptor_n << ':' << acceptor_seed << ':' << scheme << ':'
      << free_layers_string(free_layers);
  return out.str();
}

TrainedDonor train_donor(const Graph& donor_graph, int p, std::uint64_t init_seed,
                         const OptimizerConfig& config, SignConvention convention) {
  const EnergyTable table = build_energy_table(donor_graph, convention);
  TrainedDonor donor;
  donor.graph = donor_graph;
  donor.e_min = table.min_energy();
  const QaoaParams initial = random_params(p, init_seed);
  OptimizeResult result = optimize(table, initial, LayerMask::all_layers(p), config);
  donor.params = std::move(result.params);
  donor.trace = std::move(result.trace);
  donor.r_final = approximation_ratio(donor.trace.costs.back(), donor.e_min);
  return donor;
}

RunRecord run_scheme(const Graph& acceptor, const QaoaParams& donor_params,
                     const SchemeSpec& scheme, const OptimizerConfig& config,
                     SignConvention convention, const RunKey& key,
                     std::uint64_t self_opt_init_seed) {
  donor_params.validate();
  config.validate();
  const int p = donor_params.p();
  const auto start = std::chrono::steady_clock::now();

  const EnergyTable table = build_energy_table(acceptor, convention);
  const double e_min = table.min_energy();

  RunRecord record;
  record.donor_seed = key.donor_seed;
  record.acceptor_n = key.acceptor_n;
  record.acceptor_seed = key.acceptor_seed;
  record.scheme = scheme_kind_name(scheme.kind);
  record.free_layers = (scheme.kind == SchemeKind::k_layer) ? scheme.free_layers
                                                            : std::set<int>{};
  record.e_min = e_min;

  const QaoaParams initial = (scheme.kind == SchemeKind::self_opt)
                                 ? random_params(p, self_opt_init_seed)
                                 : donor_params;

  if (scheme.kind == SchemeKind::full_transfer) {
    const Statevector state = run_ansatz(table, initial);
    const double cost = expectation(state, table);
    record.r_initial = approximation_ratio(cost, e_min);
    record.r_final = record.r_initial;
    record.tau = 0;
    record.delta_r = 0.0;
    record.converged = true;
    record.final_params = initial;
    record.costs = {cost};
  } else {
    const LayerMask mask = scheme.mask(p);
    OptimizeResult result = optimize(table, initial, mask, config);
    record.r_initial = approximation_ratio(result.trace.costs.front(), e_min);
    record.r_final = approximation_ratio(result.trace.costs.back(), e_min);
    record.tau = result.trace.tau;
    record.delta_r = record.r_final - record.r_initial;
    record.converged = result.trace.converged;
    record.final_params = std::move(result.params);
    record.costs = std::move(result.trace.costs);
  }

  const auto stop = std::chrono::steady_clock::now();
  record.wall_time_seconds = std::chrono::duration<double>(stop - start).count();
  return record;
}

namespace {

json record_to_json(const RunRecord& r) {
  json j;
  j["donor_seed"] = r.donor_seed;
  j["acceptor_n"] = r.acceptor_n;
  j["acceptor_seed"] = r.acceptor_seed;
  j["scheme"] = r.scheme;
  j["free_layers"] = r.free_layers;
  j["r_initial"] = r.r_initial;
  j["r_final"] = r.r_final;
  j["tau"] = r.tau;
  j["delta_r"] = r.delta_r;
  j["converged"] = r.converged;
  j["e_min"] = r.e_min;
  j["wall_time_seconds"] = r.wall_time_seconds;
  j["final_params"] = {{"gammas", r.final_params.gammas}, {"betas", r.final_params.betas}};
  j["costs"] = r.costs;
  return j;
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  try {
    r.donor_seed = j.at("donor_seed").get<std::uint64_t>();
    r.acceptor_n = j.at("acceptor_n").get<int>();
    r.acceptor_seed = j.at("acceptor_seed").get<std::uint64_t>();
    r.scheme = j.at("scheme").get<std::string>();
    for (const auto& layer : j.at("free_layers")) r.free_layers.insert(layer.get<int>());
    r.r_initial = j.at("r_initial").get<double>();
    r.r_final = j.at("r_final").get<double>();
    r.tau = j.at("tau").get<int>();
    r.delta_r = j.at("delta_r").get<double>();
    r.converged = j.at("converged").get<bool>();
    r.e_min = j.at("e_min").get<double>();
    r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    r.final_params.gammas = j.at("final_params").at("gammas").get<std::vector<double>>();
    r.final_params.betas = j.at("final_params").at("betas").get<std::vector<double>>();
    r.costs = j.at("costs").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("record: ") + e.what());
  }
  return r;
}

}  // namespace

void append_record_jsonl(const std::filesystem::path& path, const RunRecord& record) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("records: cannot open " + path.string());
  out << record_to_json(record).dump() << "\n";
  if (!out) throw std::runtime_error("records: write failed for " + path.string());
}

std::vector<RunRecord> load_records_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("records: cannot open " + path.string());
  std::vector<RunRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ValidationError("records: " + path.string() + " line " +
                            std::to_string(line_no) + ": " + e.what());
    }
    records.push_back(record_from_json(j));
  }
  return records;
}

void write_records_jsonl(const std::filesystem::path& path,
                         const std::vector<RunRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("records: cannot open " + path.string());
  for (const RunRecord& r : records) out << record_to_json(r).dump() << "\n";
  if (!out) throw std::runtime_error("records: write failed for " + path.string());
}

void sort_records_canonical(std::vector<RunRecord>& records) {
  const auto rank = [](const RunRecord& r) {
    return std::make_tuple(r.donor_seed, r.acceptor_n, r.acceptor_seed, r.scheme,
                           free_layers_string(r.free_layers));
  };
  std::sort(records.begin(), records.end(),
            [&rank](const RunRecord& a, const RunRecord& b) { return rank(a) < rank(b); });
}

namespace {

struct BatchCell {
  RunKey key;
  const Graph* acceptor = nullptr;
  const QaoaParams* donor_params = nullptr;
  const SchemeSpec* scheme = nullptr;
  std::uint64_t self_opt_init_seed = 0;
};

json failure_to_json(const BatchCell& cell, const std::string& error) {
  json j;
  j["donor_seed"] = cell.key.donor_seed;
  j["acceptor_n"] = cell.key.acceptor_n;
  j["acceptor_seed"] = cell.key.acceptor_seed;
  j["scheme"] = scheme_kind_name(cell.scheme->kind);
  j["free_layers"] = cell.scheme->free_layers;
  j["error"] = error;
  return j;
}

}  // namespace

std::vector<RunRecord> run_batch(const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir, int workers,
                                 bool resume, BatchStats* stats) {
  config.validate();
  if (workers < 1) throw ValidationError("run_batch: workers must be at least 1");
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "graphs");
  fs::create_directories(out_dir / "donors");
  {
    std::ofstream out(out_dir / "config.json", std::ios::trunc);
    out << experiment_config_to_json(config);
  }

  BatchStats local_stats;

  // Donor preparation is cheap and deterministic; always recomputed.
  struct PreparedDonor {
    DonorConfig cfg;
    TrainedDonor trained;
  };
  std::vector<PreparedDonor> donors;
  for (const DonorConfig& d : config.donors) {
    const bool weighted = d.weighted.value_or(config.acceptor.weighted);
    Graph g = generate_erdos_renyi(d.n_nodes, config.acceptor.edge_prob, d.seed, weighted);
    save_graph(g, out_dir / "graphs" / graph_file_name(d.n_nodes, d.seed));
    TrainedDonor trained =
        train_donor(g, config.p, d.init_seed, config.optimizer, config.convention);
    json dj;
    dj["seed"] = d.seed;
    dj["init_seed"] = d.init_seed;
    dj["n_nodes"] = d.n_nodes;
    dj["weighted"] = weighted;
    dj["e_min"] = trained.e_min;
    dj["r_final"] = trained.r_final;
    dj["tau"] = trained.trace.tau;
    dj["converged"] = trained.trace.converged;
    dj["params"] = {{"gammas", trained.params.gammas}, {"betas", trained.params.betas}};
    dj["costs"] = trained.trace.costs;
    std::ofstream out(out_dir / "donors" / ("donor_" + std::to_string(d.seed) + ".json"));
    out << dj.dump(2) << "\n";
    donors.push_back({d, std::move(trained)});
  }

  // Acceptor instances, one per (node count, seed).
  std::map<std::pair<int, std::uint64_t>, Graph> acceptors;
  for (int n : config.acceptor.node_counts) {
    for (std::uint64_t seed : config.acceptor.seeds) {
      Graph g = generate_erdos_renyi(n, config.acceptor.edge_prob, seed,
                                     config.acceptor.weighted);
      save_graph(g, out_dir / "graphs" / graph_file_name(n, seed));
      acceptors.emplace(std::make_pair(n, seed), std::move(g));
    }
  }

  const fs::path records_path = out_dir / "records.jsonl";
  std::vector<RunRecord> records;
  std::set<std::string> have;
  if (resume && fs::exists(records_path)) {
    records = load_records_jsonl(records_path);
    for (const RunRecord& r : records) have.insert(r.key());
  } else if (fs::exists(records_path)) {
    fs::remove(records_path);
  }

  std::vector<BatchCell> cells;
  for (const PreparedDonor& donor : donors) {
    for (int n : config.acceptor.node_counts) {
      for (std::uint64_t seed : config.acceptor.seeds) {
        for (const SchemeSpec& scheme : config.schemes) {
          BatchCell cell;
          cell.key = {donor.cfg.seed, n, seed};
          cell.acceptor = &acceptors.at({n, seed});
          cell.donor_params = &donor.trained.params;
          cell.scheme = &scheme;
          cell.self_opt_init_seed = mix_seed(donor.cfg.init_seed,
                                             static_cast<std::uint64_t>(n), seed);
          RunRecord probe;
          probe.donor_seed = cell.key.donor_seed;
          probe.acceptor_n = cell.key.acceptor_n;
          probe.acceptor_seed = cell.key.acceptor_seed;
          probe.scheme = scheme_kind_name(scheme.kind);
          probe.free_layers =
              (scheme.kind == SchemeKind::k_layer) ? scheme.free_layers : std::set<int>{};
          if (have.count(probe.key()) != 0) {
            ++local_stats.resumed;
            continue;
          }
          cells.push_back(cell);
        }
      }
    }
  }

  std::mutex io_mutex;
  std::atomic<std::size_t> next_cell{0};
  std::exception_ptr first_error;
  const auto worker_main = [&]() {
    try {
      while (true) {
        const std::size_t index = next_cell.fetch_add(1);
        if (index >= cells.size()) break;
        const BatchCell& cell = cells[index];
        try {
          RunRecord record =
              run_scheme(*cell.acceptor, *cell.donor_params, *cell.scheme,
                         config.optimizer, config.convention, cell.key,
                         cell.self_opt_init_seed);
          std::lock_guard<std::mutex> lock(io_mutex);
          append_record_jsonl(records_path, record);
          records.push_back(std::move(record));
          ++local_stats.computed;
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(io_mutex);
          std::ofstream out(out_dir / "failures.jsonl", std::ios::app);
          out << failure_to_json(cell, e.what()).dump() << "\n";
          ++local_stats.failed;
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(io_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (workers == 1) {
    worker_main();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker_main);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  sort_records_canonical(records);
  write_records_jsonl(records_path, records);
  if (stats != nullptr) *stats = local_stats;
  return records;
}

GridSearchResult grid_search_layer(const EnergyTable& table, const QaoaParams& params,
                                   int layer, int resolution) {
  params.validate();
  const int p = params.p();
  if (layer < 1 || layer > p) {
    throw ValidationError("grid_search_layer: layer outside [1, p]");
  }
  if (resolution < 1) {
    throw ValidationError("grid_search_layer: resolution must be at least 1");
  }

  GridSearchResult result;
  result.layer = layer;
  result.resolution = resolution;
  result.gamma_values.resize(resolution);
  result.beta_values.resize(resolution);
  for (int i = 0; i < resolution; ++i) {
    result.gamma_values[i] = -kPi + (2.0 * kPi / resolution) * i;
    result.beta_values[i] = -kPi / 2.0 + (kPi / resolution) * i;
  }
  result.values.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);

  // Layers before the swept one never change across the scan.
  Statevector prefix = plus_state(table.n_qubits);
  for (int k = 0; k < layer - 1; ++k) {
    apply_cost_layer(prefix, table, params.gammas[k]);
    apply_mixer_layer(prefix, params.betas[k]);
  }

  bool first = true;
  for (int i = 0; i < resolution; ++i) {
    Statevector after_cost = prefix;
    apply_cost_layer(after_cost, table, result.gamma_values[i]);
    for (int j = 0; j < resolution; ++j) {
      Statevector state = after_cost;
      apply_mixer_layer(state, result.beta_values[j]);
      for (int k = layer; k < p; ++k) {
        apply_cost_layer(state, table, params.gammas[k]);
        apply_mixer_layer(state, params.betas[k]);
      }
      const double value = expectation(state, table);
      result.values[static_cast<std::size_t>(i) * resolution + j] = value;
      if (first || value < result.min_value) {
        first = false;
        result.min_value = value;
        result.best_gamma = result.gamma_values[i];
        result.best_beta = result.beta_values[j];
      }
    }
  }
  return result;
}

}  // namespace qaoalab
