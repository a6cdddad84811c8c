#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qaoalab/graph.hpp"

namespace qaoalab {

/// Sign of the diagonal cost function. `maxcut` scores agreeing endpoints
/// positively so the ground state encodes the maximum cut; `paper_literal`
/// is the negated variant some references use.
enum class SignConvention { maxcut, paper_literal };

/// Precomputed diagonal cost E(z) for all 2^n computational basis states.
/// Node i maps to bit i of z (bit 0 least significant).
struct EnergyTable {
  int n_qubits = 0;
  std::vector<double> energies;

  /// Distinct-value compression: levels holds the sorted distinct energies
  /// and level_of[z] indexes into it. Built only when the level count is
  /// small enough that a per-level phase cache pays off (always true for
  /// unweighted graphs); both vectors stay empty otherwise.
  std::vector<double> levels;
  std::vector<std::uint32_t> level_of;

  double min_energy() const;
};

EnergyTable build_energy_table(const Graph& g,
                               SignConvention convention = SignConvention::maxcut);

/// One angle pair per layer; gammas scale the cost phase, betas the mixer.
struct QaoaParams {
  std::vector<double> gammas;
  std::vector<double> betas;

  int p() const { return static_cast<int>(gammas.size()); }
  /// Throws ValidationError unless both vectors have the same nonzero length.
  void validate() const;
};

struct Statevector {
  int n_qubits = 0;
  std::vector<std::complex<double>> amplitudes;

  double norm_sq() const;
};

/// Uniform superposition |+>^n, amplitude 2^(-n/2) everywhere.
Statevector plus_state(int n_qubits);

/// In-place a_z *= exp(-i * gamma * E(z)).
void apply_cost_layer(Statevector& state, const EnergyTable& table, double gamma);

/// In-place exp(-i * beta * X) on every qubit:
/// per qubit, (a0, a1) -> (cos(beta) a0 - i sin(beta) a1,
///                         -i sin(beta) a0 + cos(beta) a1).
void apply_mixer_layer(Statevector& state, double beta);

/// |+>^n followed by p alternating cost/mixer layers (cost first).
Statevector run_ansatz(const EnergyTable& table, const QaoaParams& params);

/// <state| diag(E) |state>, accumulated in basis-state order.
double expectation(const Statevector& state, const EnergyTable& table);

/// energy / e_min. Requires e_min < 0 (a graph with at least one edge always
/// has a negative ground energy under either convention); throws
/// ValidationError otherwise.
double approximation_ratio(double energy, double e_min);

}  // namespace qaoalab
