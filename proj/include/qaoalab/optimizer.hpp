#pragma once

#include <set>

#include "qaoalab/diff.hpp"

namespace qaoalab {

/// The set of layers (1-based) whose angles an optimizer may update. Frozen
/// layers keep their parameters and accumulator entries bitwise unchanged.
struct LayerMask {
  std::set<int> free_layers;

  static LayerMask all_layers(int p);
  bool is_free(int layer) const { return free_layers.count(layer) != 0; }
  /// Throws ValidationError if empty or any index falls outside [1, p].
  void validate(int p) const;
};

struct OptimizerConfig {
  double learning_rate = 0.1;
  double epsilon = 1e-8;
  /// Converged once this many successive absolute cost differences in a row
  /// fall below the threshold.
  double convergence_threshold = 1e-4;
  int convergence_window = 3;
  int max_iterations = 1000;

  /// Throws ValidationError on non-positive rates, thresholds, window or
  /// iteration counts.
  void validate() const;
};

/// Per-parameter sums of squared gradients (Adagrad state).
struct AdagradAccumulator {
  std::vector<double> gammas;
  std::vector<double> betas;

  static AdagradAccumulator zeros(int p);
};

struct OptTrace {
  /// costs[0] is the cost at the initial parameters; one entry per iteration
  /// follows.
  std::vector<double> costs;
  /// Iterations actually run: costs.size() - 1.
  int tau = 0;
  bool converged = false;
};

/// One masked Adagrad update in place:
///   accum += g^2;  theta -= lr * g / (sqrt(accum) + eps)
/// for every parameter of every free layer; frozen layers untouched.
void adagrad_step(QaoaParams& params, const GradientVector& grad,
                  AdagradAccumulator& accum, const LayerMask& mask,
                  const OptimizerConfig& config);

/// True when the last `window` successive absolute differences of `costs`
/// all lie below the threshold. Fewer than window + 1 entries: false.
bool check_convergence(const std::vector<double>& costs, const OptimizerConfig& config);

struct OptimizeResult {
  QaoaParams params;
  OptTrace trace;
};

/// Adagrad descent of <H> from `initial`, updating only masked layers, until
/// convergence or max_iterations. Throws std::runtime_error (with the
/// iteration index) if the cost or any gradient entry turns non-finite.
OptimizeResult optimize(const EnergyTable& table, const QaoaParams& initial,
                        const LayerMask& mask, const OptimizerConfig& config);

}  // namespace qaoalab
