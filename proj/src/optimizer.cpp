#include "qaoalab/optimizer.hpp"

#include <cmath>
#include <string>

namespace qaoalab {

LayerMask LayerMask::all_layers(int p) {
  LayerMask mask;
  for (int k = 1; k <= p; ++k) mask.free_layers.insert(k);
  return mask;
}

void LayerMask::validate(int p) const {
  if (free_layers.empty()) {
    throw ValidationError("layer mask: at least one free layer required");
  }
  for (int layer : free_layers) {
    if (layer < 1 || layer > p) {
      throw ValidationError("layer mask: layer " + std::to_string(layer) +
                            " outside [1, " + std::to_string(p) + "]");
    }
  }
}

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0)) {
    throw ValidationError("optimizer: learning_rate must be positive");
  }
  if (!(epsilon > 0.0)) throw ValidationError("optimizer: epsilon must be positive");
  if (!(convergence_threshold > 0.0)) {
    throw ValidationError("optimizer: convergence_threshold must be positive");
  }
  if (convergence_window < 1) {
    throw ValidationError("optimizer: convergence_window must be at least 1");
  }
  if (max_iterations < 1) {
    throw ValidationError("optimizer: max_iterations must be at least 1");
  }
}

AdagradAccumulator AdagradAccumulator::zeros(int p) {
  AdagradAccumulator accum;
  accum.gammas.assign(p, 0.0);
  accum.betas.assign(p, 0.0);
  return accum;
}

void adagrad_step(QaoaParams& params, const GradientVector& grad,
                  AdagradAccumulator& accum, const LayerMask& mask,
                  const OptimizerConfig& config) {
  const int p = params.p();
  if (grad.p() != p || static_cast<int>(accum.gammas.size()) != p) {
    throw ValidationError("adagrad_step: parameter, gradient and accumulator "
                          "lengths must agree");
  }
  mask.validate(p);
  for (int k = 0; k < p; ++k) {
    if (!mask.is_free(k + 1)) continue;
    accum.gammas[k] += grad.d_gammas[k] * grad.d_gammas[k];
    params.gammas[k] -=
        config.learning_rate * grad.d_gammas[k] / (std::sqrt(accum.gammas[k]) + config.epsilon);
    accum.betas[k] += grad.d_betas[k] * grad.d_betas[k];
    params.betas[k] -=
        config.learning_rate * grad.d_betas[k] / (std::sqrt(accum.betas[k]) + config.epsilon);
  }
}

bool check_convergence(const std::vector<double>& costs, const OptimizerConfig& config) {
  const int window = config.convergence_window;
  if (static_cast<int>(costs.size()) < window + 1) return false;
  const std::size_t last = costs.size() - 1;
  for (int i = 0; i < window; ++i) {
    const double diff = std::abs(costs[last - i] - costs[last - i - 1]);
    if (!(diff < config.convergence_threshold)) return false;
  }
  return true;
}

OptimizeResult optimize(const EnergyTable& table, const QaoaParams& initial,
                        const LayerMask& mask, const OptimizerConfig& config) {
  initial.validate();
  config.validate();
  const int p = initial.p();
  mask.validate(p);

  OptimizeResult result;
  result.params = initial;
  AdagradAccumulator accum = AdagradAccumulator::zeros(p);

  const auto cost_at = [&table](const QaoaParams& point) {
    const Statevector state = run_ansatz(table, point);
    return expectation(state, table);
  };
  const auto require_finite = [](double value, const char* what, int iteration) {
    if (!std::isfinite(value)) {
      throw std::runtime_error(std::string("optimize: non-finite ") + what +
                               " at iteration " + std::to_string(iteration));
    }
  };

  double cost = cost_at(result.params);
  require_finite(cost, "cost", 0);
  result.trace.costs.push_back(cost);

  for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
    const GradientVector grad = analytic_gradient(table, result.params);
    for (int k = 0; k < p; ++k) {
      require_finite(grad.d_gammas[k], "gradient", iteration);
      require_finite(grad.d_betas[k], "gradient", iteration);
    }
    adagrad_step(result.params, grad, accum, mask, config);
    cost = cost_at(result.params);
    require_finite(cost, "cost", iteration);
    result.trace.costs.push_back(cost);
    if (check_convergence(result.trace.costs, config)) {
      result.trace.converged = true;
      break;
    }
  }
  result.trace.tau = static_cast<int>(result.trace.costs.size()) - 1;
  return result;
}

}  // namespace qaoalab
