#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qaoalab/optimizer.hpp"

namespace qaoalab {

/// Transfer schemes:
///   self_opt      - fresh random initialization, all layers trained
///   full_transfer - donor parameters used verbatim, no optimization
///   k_layer       - donor parameters, only the listed layers trained
///   all_layer     - donor parameters, every layer trained
enum class SchemeKind { self_opt, full_transfer, k_layer, all_layer };

std::string scheme_kind_name(SchemeKind kind);
SchemeKind scheme_kind_from_name(const std::string& name);

struct SchemeSpec {
  SchemeKind kind = SchemeKind::full_transfer;
  /// Only meaningful for k_layer (1-based layer indices).
  std::set<int> free_layers;

  /// Config-level invariants: k_layer requires a non-empty proper subset of
  /// [1, p] (training every layer is spelled all_layer); other kinds must
  /// leave free_layers empty.
  void validate(int p) const;
  /// Layer mask for the optimizing kinds; ValidationError for full_transfer.
  LayerMask mask(int p) const;
};

struct DonorConfig {
  int n_nodes = 8;
  std::uint64_t seed = 13;
  /// Seed for the random initial angles of donor training.
  std::uint64_t init_seed = 505;
  /// Unset: follow the acceptor weighted flag.
  std::optional<bool> weighted;
};

struct AcceptorConfig {
  std::vector<int> node_counts = {6, 8, 10, 12};
  std::vector<std::uint64_t> seeds;
  double edge_prob = 0.6;
  bool weighted = false;
};

struct ExperimentConfig {
  int p = 5;
  SignConvention convention = SignConvention::maxcut;
  std::vector<DonorConfig> donors;
  AcceptorConfig acceptor;
  std::vector<SchemeSpec> schemes;
  OptimizerConfig optimizer;

  void validate() const;
  /// Shifts every graph seed (donor and acceptor) by `offset`; init seeds
  /// are left alone so parameter draws stay comparable across cohorts.
  void apply_seed_offset(std::uint64_t offset);
};

/// Parses a config JSON object; absent keys keep the defaults above.
/// Unknown keys and malformed values raise ValidationError.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string experiment_config_to_json(const ExperimentConfig& config);

/// Independent uniform draws from one stream: p gammas in [-pi, pi) followed
/// by p betas in [-pi/2, pi/2).
QaoaParams random_params(int p, std::uint64_t seed);

/// Outcome of one (donor, acceptor, scheme) cell.
struct RunRecord {
  std::uint64_t donor_seed = 0;
  int acceptor_n = 0;
  std::uint64_t acceptor_seed = 0;
  std::string scheme;
  std::set<int> free_layers;
  double r_initial = 0.0;
  double r_final = 0.0;
  int tau = 0;
  double delta_r = 0.0;
  bool converged = false;
  double e_min = 0.0;
  double wall_time_seconds = 0.0;
  QaoaParams final_params;
  std::vector<double> costs;

  /// Identity within a batch; resuming skips keys already on disk.
  std::string key() const;
};

/// Canonical "1|2|3" rendering of a free-layer set (empty string for none).
std::string free_layers_string(const std::set<int>& layers);
std::set<int> parse_free_layers(const std::string& text);

struct TrainedDonor {
  Graph graph;
  QaoaParams params;
  OptTrace trace;
  double r_final = 0.0;
  double e_min = 0.0;
};

/// Full-depth training on one donor graph from random_params(p, init_seed).
TrainedDonor train_donor(const Graph& donor_graph, int p, std::uint64_t init_seed,
                         const OptimizerConfig& config,
                         SignConvention convention = SignConvention::maxcut);

struct RunKey {
  std::uint64_t donor_seed = 0;
  int acceptor_n = 0;
  std::uint64_t acceptor_seed = 0;
};

/// Applies one scheme to one acceptor instance. donor_params seed the angles
/// for the transfer schemes; self_opt draws fresh angles from
/// self_opt_init_seed instead. r_initial is always the ratio at the starting
/// angles, so full_transfer reports tau = 0 and delta_r = 0.
RunRecord run_scheme(const Graph& acceptor, const QaoaParams& donor_params,
                     const SchemeSpec& scheme, const OptimizerConfig& config,
                     SignConvention convention, const RunKey& key,
                     std::uint64_t self_opt_init_seed = 0);

/// JSON-lines persistence for run records (one object per line).
void append_record_jsonl(const std::filesystem::path& path, const RunRecord& record);
std::vector<RunRecord> load_records_jsonl(const std::filesystem::path& path);
void write_records_jsonl(const std::filesystem::path& path,
                         const std::vector<RunRecord>& records);

/// Stable ordering of batch outputs: donor seed, acceptor size, acceptor
/// seed, scheme name, free layers.
void sort_records_canonical(std::vector<RunRecord>& records);

struct BatchStats {
  int computed = 0;
  int resumed = 0;
  int failed = 0;
};

/// Runs the full cross product donors x node_counts x seeds x schemes.
/// Writes graphs/ and donors/ artifacts plus records.jsonl under out_dir,
/// appending records as they finish and rewriting the file in canonical
/// order at the end. With resume == true, keys already present on disk are
/// not recomputed. Worker count > 1 parallelizes cells without changing any
/// persisted bytes. Failed cells are logged to failures.jsonl and skipped.
std::vector<RunRecord> run_batch(const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir,
                                 int workers = 1, bool resume = false,
                                 BatchStats* stats = nullptr);

/// Cost surface of one layer's (gamma, beta) plane, all other layers fixed.
struct GridSearchResult {
  int layer = 0;
  int resolution = 0;
  std::vector<double> gamma_values;
  std::vector<double> beta_values;
  /// Row-major: value[i * resolution + j] pairs gamma_values[i] with
  /// beta_values[j].
  std::vector<double> values;
  double best_gamma = 0.0;
  double best_beta = 0.0;
  double min_value = 0.0;
};

/// Scans gamma in [-pi, pi) and beta in [-pi/2, pi/2), resolution points per
/// axis, gamma-major; ties keep the first (lowest-index) hit. States up to
/// the swept layer are cached across the scan.
GridSearchResult grid_search_layer(const EnergyTable& table, const QaoaParams& params,
                                   int layer, int resolution);

}  // namespace qaoalab
