#pragma once

#include <optional>

#include "qaoalab/experiments.hpp"

namespace qaoalab {

/// Aggregate over all records sharing (scheme, free_layers, n_nodes).
/// Standard deviations are sample deviations (0 for a single record).
/// dr_over_tau averages delta_r / tau per record; records with tau == 0
/// are excluded from that metric only, and a group with no tau > 0 record
/// reports no value at all.
struct SchemeSummary {
  std::string scheme;
  std::string free_layers;
  int n_nodes = 0;
  int n_instances = 0;
  double mean_r = 0.0;
  double std_r = 0.0;
  double mean_tau = 0.0;
  double std_tau = 0.0;
  std::optional<double> mean_dr_over_tau;
  std::optional<double> std_dr_over_tau;
};

std::vector<SchemeSummary> aggregate(const std::vector<RunRecord>& records);

/// Shortest decimal form with 12 significant digits ("%.12g").
std::string format_float(double value);

/// Writes records.csv and summary.csv under out_dir. Column sets and order
/// are fixed, rows follow the canonical record order, floats use
/// format_float; reruns over identical records produce identical bytes.
void write_csv(const std::vector<RunRecord>& records,
               const std::vector<SchemeSummary>& summaries,
               const std::filesystem::path& out_dir);

/// Renders standalone SVG charts under out_dir:
///   r_by_seed_n<N>_donor<S>.svg   grouped bars, final ratio per acceptor
///                                 seed, one group of bars per scheme
///   mean_r_vs_nodes.svg           mean final ratio vs node count
///   mean_tau_vs_nodes.svg         mean iteration count vs node count
///   mean_dr_per_tau_vs_nodes.svg  mean improvement per iteration vs nodes
/// Line charts carry one series per scheme with sample-std error bars.
/// Schemes missing a metric are noted on stderr and omitted. Output is a
/// pure function of the inputs. Returns the file names written.
std::vector<std::string> render_figures(const std::vector<RunRecord>& records,
                                        const std::vector<SchemeSummary>& summaries,
                                        const std::filesystem::path& out_dir);

/// Padded [lo, hi] axis range covering every sample; exposed for tests.
struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
};
AxisRange axis_range(const std::vector<double>& values);

}  // namespace qaoalab
