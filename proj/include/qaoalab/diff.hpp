#pragma once

#include "qaoalab/simulator.hpp"

namespace qaoalab {

/// Full-length gradient of <H> with respect to every angle. Layer masking is
/// an optimizer concern; differentiation always covers all 2p parameters.
struct GradientVector {
  std::vector<double> d_gammas;
  std::vector<double> d_betas;

  int p() const { return static_cast<int>(d_gammas.size()); }
};

/// Adjoint-mode gradient: one forward pass plus one reverse sweep that
/// unwinds each layer on both the state and the cost-applied adjoint state.
/// Cost O(p * n * 2^n), exact up to rounding.
GradientVector analytic_gradient(const EnergyTable& table, const QaoaParams& params);

/// Central differences, (f(x+h) - f(x-h)) / (2h) per coordinate. Independent
/// of the adjoint code path on purpose; step must lie in [1e-7, 1e-3]
/// (ValidationError otherwise).
GradientVector finite_diff_gradient(const EnergyTable& table, const QaoaParams& params,
                                    double step = 1e-5);

}  // namespace qaoalab
