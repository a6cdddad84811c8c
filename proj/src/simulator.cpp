#include "qaoalab/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace qaoalab {

double EnergyTable::min_energy() const {
  if (energies.empty()) throw ValidationError("energy table: empty");
  return *std::min_element(energies.begin(), energies.end());
}

EnergyTable build_energy_table(const Graph& g, SignConvention convention) {
  g.validate();
  if (g.n_nodes < 1) throw ValidationError("energy table: graph has no nodes");
  EnergyTable table;
  table.n_qubits = g.n_nodes;
  const std::size_t dim = std::size_t{1} << g.n_nodes;
  table.energies.assign(dim, 0.0);
  const double sign = (convention == SignConvention::maxcut) ? 1.0 : -1.0;
  for (const Edge& e : g.edges) {
    // Agreeing endpoints contribute +w under the maxcut convention.
    const double agree = sign * e.weight;
    const double contrib[2] = {agree, -agree};
    const int u = e.u;
    const int v = e.v;
    for (std::size_t z = 0; z < dim; ++z) {
      table.energies[z] += contrib[((z >> u) ^ (z >> v)) & 1u];
    }
  }

  // Distinct-value index: lets the cost layer compute one complex exponential
  // per level instead of per basis state. Skipped when compression is poor
  // (generic weighted graphs where nearly every energy is unique).
  std::vector<double> sorted(table.energies);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() * 4 <= dim) {
    table.levels = std::move(sorted);
    table.level_of.resize(dim);
    for (std::size_t z = 0; z < dim; ++z) {
      const auto it =
          std::lower_bound(table.levels.begin(), table.levels.end(), table.energies[z]);
      table.level_of[z] = static_cast<std::uint32_t>(it - table.levels.begin());
    }
  }
  return table;
}

void QaoaParams::validate() const {
  if (gammas.empty()) throw ValidationError("params: at least one layer required");
  if (gammas.size() != betas.size()) {
    throw ValidationError("params: gammas and betas must have equal length");
  }
}

double Statevector::norm_sq() const {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return sum;
}

Statevector plus_state(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ValidationError("plus_state: n_qubits must lie in [1, " +
                          std::to_string(kMaxQubits) + "]");
  }
  Statevector state;
  state.n_qubits = n_qubits;
  const std::size_t dim = std::size_t{1} << n_qubits;
  state.amplitudes.assign(dim, std::complex<double>(1.0 / std::sqrt(double(dim)), 0.0));
  return state;
}

namespace {

void check_state_matches(const Statevector& state, const EnergyTable& table,
                         const char* who) {
  if (state.n_qubits != table.n_qubits ||
      state.amplitudes.size() != table.energies.size()) {
    throw ValidationError(std::string(who) + ": state and energy table disagree on size");
  }
}

}  // namespace

void apply_cost_layer(Statevector& state, const EnergyTable& table, double gamma) {
  check_state_matches(state, table, "apply_cost_layer");
  const std::size_t dim = state.amplitudes.size();
  if (!table.levels.empty()) {
    std::vector<std::complex<double>> phases(table.levels.size());
    for (std::size_t l = 0; l < table.levels.size(); ++l) {
      phases[l] = std::polar(1.0, -gamma * table.levels[l]);
    }
    for (std::size_t z = 0; z < dim; ++z) {
      state.amplitudes[z] *= phases[table.level_of[z]];
    }
  } else {
    for (std::size_t z = 0; z < dim; ++z) {
      state.amplitudes[z] *= std::polar(1.0, -gamma * table.energies[z]);
    }
  }
}

void apply_mixer_layer(Statevector& state, double beta) {
  if (state.n_qubits < 1) throw ValidationError("apply_mixer_layer: empty state");
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const std::size_t half = state.amplitudes.size() >> 1;
  auto* amps = state.amplitudes.data();
  for (int q = 0; q < state.n_qubits; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    const std::size_t lo_mask = bit - 1;
    const std::size_t hi_mask = ~lo_mask;
    for (std::size_t i = 0; i < half; ++i) {
      const std::size_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
      const std::size_t i1 = i0 | bit;
      const std::complex<double> a0 = amps[i0];
      const std::complex<double> a1 = amps[i1];
      // exp(-i beta X): diagonal cos(beta), off-diagonal -i sin(beta).
      amps[i0] = {c * a0.real() + s * a1.imag(), c * a0.imag() - s * a1.real()};
      amps[i1] = {c * a1.real() + s * a0.imag(), c * a1.imag() - s * a0.real()};
    }
  }
}

Statevector run_ansatz(const EnergyTable& table, const QaoaParams& params) {
  params.validate();
  Statevector state = plus_state(table.n_qubits);
  for (int k = 0; k < params.p(); ++k) {
    apply_cost_layer(state, table, params.gammas[k]);
    apply_mixer_layer(state, params.betas[k]);
  }
  return state;
}

double expectation(const Statevector& state, const EnergyTable& table) {
  check_state_matches(state, table, "expectation");
  double sum = 0.0;
  for (std::size_t z = 0; z < state.amplitudes.size(); ++z) {
    sum += std::norm(state.amplitudes[z]) * table.energies[z];
  }
  return sum;
}

double approximation_ratio(double energy, double e_min) {
  if (!(e_min < 0.0)) {
    throw ValidationError("approximation_ratio: ground energy must be negative");
  }
  return energy / e_min;
}

}  // namespace qaoalab
