#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "dense_reference.hpp"
#include "doctest.h"
#include "qaoalab/rng.hpp"
#include "qaoalab/simulator.hpp"

using namespace qaoalab;

namespace {

constexpr double kPi = std::numbers::pi;

Graph single_edge() {
  Graph g;
  g.n_nodes = 2;
  g.edges = {{0, 1, 1.0}};
  return g;
}

QaoaParams draw_params(int p, std::uint64_t seed) {
  SplitMix64 rng(seed);
  QaoaParams params;
  for (int k = 0; k < p; ++k) params.gammas.push_back(rng.next_in(-kPi, kPi));
  for (int k = 0; k < p; ++k) params.betas.push_back(rng.next_in(-kPi / 2, kPi / 2));
  return params;
}

}  // namespace

TEST_CASE("single edge energy table") {
  const EnergyTable table = build_energy_table(single_edge());
  REQUIRE(table.energies.size() == 4);
  CHECK(table.energies[0] == 1.0);   // 00: endpoints agree
  CHECK(table.energies[1] == -1.0);  // 01
  CHECK(table.energies[2] == -1.0);  // 10
  CHECK(table.energies[3] == 1.0);   // 11
  CHECK(table.min_energy() == -1.0);
}

TEST_CASE("literal convention negates every entry") {
  const Graph g = generate_erdos_renyi(6, 0.6, 2, true);
  const EnergyTable a = build_energy_table(g, SignConvention::maxcut);
  const EnergyTable b = build_energy_table(g, SignConvention::paper_literal);
  REQUIRE(a.energies.size() == b.energies.size());
  for (std::size_t z = 0; z < a.energies.size(); ++z) {
    CHECK(b.energies[z] == -a.energies[z]);
  }
}

TEST_CASE("energy table invariants on random instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const bool weighted = seed % 2 == 1;
    const Graph g = generate_erdos_renyi(8, 0.6, seed, weighted);
    const EnergyTable table = build_energy_table(g);
    const std::size_t dim = table.energies.size();
    double sum = 0.0;
    for (double e : table.energies) sum += e;
    if (weighted) {
      CHECK(std::abs(sum) < 1e-9);
    } else {
      CHECK(sum == 0.0);
    }
    // Flipping every spin preserves all endpoint agreements.
    for (std::size_t z = 0; z < dim; ++z) {
      CHECK(table.energies[z] == table.energies[~z & (dim - 1)]);
    }
    // Weighted instances reach the same ground energy along a different
    // float summation path, so equality holds only up to rounding there.
    const double e_min = brute_force_maxcut(g).e_min;
    if (weighted) {
      CHECK(table.min_energy() == doctest::Approx(e_min).epsilon(1e-12));
    } else {
      CHECK(table.min_energy() == e_min);
    }
    CHECK(table.energies[0] == doctest::Approx(g.total_weight()));
  }
}

TEST_CASE("energy table matches the dense recomputation") {
  const Graph g = generate_erdos_renyi(7, 0.5, 9, true);
  for (const SignConvention conv :
       {SignConvention::maxcut, SignConvention::paper_literal}) {
    const EnergyTable table = build_energy_table(g, conv);
    for (std::size_t z = 0; z < table.energies.size(); ++z) {
      CHECK(table.energies[z] == doctest::Approx(dense::energy(g, z, conv)).epsilon(1e-12));
    }
  }
}

TEST_CASE("distinct-level index reproduces the raw table") {
  const Graph g = generate_erdos_renyi(8, 0.6, 1, false);
  const EnergyTable table = build_energy_table(g);
  REQUIRE_FALSE(table.levels.empty());  // unweighted energies collapse to few levels
  for (std::size_t z = 0; z < table.energies.size(); ++z) {
    CHECK(table.levels[table.level_of[z]] == table.energies[z]);
  }
  // The compressed and direct cost-layer paths must agree bitwise.
  EnergyTable direct = table;
  direct.levels.clear();
  direct.level_of.clear();
  Statevector a = plus_state(8);
  Statevector b = plus_state(8);
  apply_cost_layer(a, table, 0.733);
  apply_cost_layer(b, direct, 0.733);
  for (std::size_t z = 0; z < a.amplitudes.size(); ++z) {
    CHECK(a.amplitudes[z] == b.amplitudes[z]);
  }
}

TEST_CASE("plus state is the uniform superposition") {
  const Statevector state = plus_state(5);
  CHECK(state.n_qubits == 5);
  REQUIRE(state.amplitudes.size() == 32);
  for (const auto& a : state.amplitudes) {
    CHECK(a.real() == doctest::Approx(1.0 / std::sqrt(32.0)));
    CHECK(a.imag() == 0.0);
  }
  CHECK(state.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(plus_state(0), ValidationError);
  CHECK_THROWS_AS(plus_state(kMaxQubits + 1), ValidationError);
}

TEST_CASE("zero angles leave the state untouched") {
  const Graph g = generate_erdos_renyi(6, 0.6, 3, false);
  const EnergyTable table = build_energy_table(g);
  Statevector state = plus_state(6);
  apply_cost_layer(state, table, 0.0);
  apply_mixer_layer(state, 0.0);
  const Statevector reference = plus_state(6);
  for (std::size_t z = 0; z < state.amplitudes.size(); ++z) {
    CHECK(state.amplitudes[z] == reference.amplitudes[z]);
  }
}

TEST_CASE("layers preserve the norm") {
  const Graph g = generate_erdos_renyi(7, 0.6, 5, true);
  const EnergyTable table = build_energy_table(g);
  const Statevector state = run_ansatz(table, draw_params(5, 71));
  CHECK(state.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("half-turn mixer maps the all-zeros state to the all-ones state") {
  Statevector state;
  state.n_qubits = 2;
  state.amplitudes = {{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  apply_mixer_layer(state, kPi / 2.0);
  // (-i sin(pi/2))^2 = -1 on |11>; every other amplitude is O(cos(pi/2)).
  CHECK(std::abs(state.amplitudes[3] - std::complex<double>(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(state.amplitudes[0]) < 1e-12);
  CHECK(std::abs(state.amplitudes[1]) < 1e-12);
  CHECK(std::abs(state.amplitudes[2]) < 1e-12);
}

TEST_CASE("cost and mixer layers match their dense-matrix counterparts") {
  const Graph g = generate_erdos_renyi(3, 0.9, 2, false);
  const EnergyTable table = build_energy_table(g);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const QaoaParams params = draw_params(2, 100 + seed);
    const Statevector fast = run_ansatz(table, params);
    const dense::Vector slow = dense::run_ansatz(g, params, SignConvention::maxcut);
    for (std::size_t z = 0; z < slow.size(); ++z) {
      CHECK(std::abs(fast.amplitudes[z] - slow[z]) < 1e-12);
    }
  }
}

TEST_CASE("single edge expectation has the known closed form") {
  const EnergyTable table = build_energy_table(single_edge());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const QaoaParams params = draw_params(1, 200 + seed);
    const Statevector state = run_ansatz(table, params);
    const double expected = std::sin(4.0 * params.betas[0]) * std::sin(2.0 * params.gammas[0]);
    CHECK(expectation(state, table) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("plus state expectation is the mean energy") {
  const Graph g = generate_erdos_renyi(8, 0.6, 6, false);
  const EnergyTable table = build_energy_table(g);
  const Statevector state = plus_state(8);
  CHECK(expectation(state, table) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("unweighted cost is half-turn periodic in gamma") {
  // All energies share the parity of the edge count, so a gamma shift of pi
  // contributes only a global phase.
  const Graph g = generate_erdos_renyi(6, 0.6, 8, false);
  const EnergyTable table = build_energy_table(g);
  QaoaParams params = draw_params(1, 300);
  const Statevector a = run_ansatz(table, params);
  params.gammas[0] += kPi;
  const Statevector b = run_ansatz(table, params);
  CHECK(expectation(a, table) == doctest::Approx(expectation(b, table)).epsilon(1e-12));
}

TEST_CASE("approximation ratio guards its denominator") {
  CHECK(approximation_ratio(-0.5, -1.0) == 0.5);
  CHECK(approximation_ratio(-1.0, -1.0) == 1.0);
  CHECK_THROWS_AS(approximation_ratio(-0.5, 0.0), ValidationError);
  CHECK_THROWS_AS(approximation_ratio(-0.5, 2.0), ValidationError);
}

TEST_CASE("size mismatches are rejected") {
  const EnergyTable small = build_energy_table(single_edge());
  Statevector big = plus_state(3);
  CHECK_THROWS_AS(expectation(big, small), ValidationError);
  CHECK_THROWS_AS(apply_cost_layer(big, small, 0.1), ValidationError);
  QaoaParams bad;
  bad.gammas = {0.1, 0.2};
  bad.betas = {0.1};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  QaoaParams empty;
  CHECK_THROWS_AS(empty.validate(), ValidationError);
}
