#pragma once

// Test-only dense-matrix simulator. Operators are materialized as full
// 2^n x 2^n matrices and multiplied into the state, sharing no kernel code
// with the library simulator so the two can cross-check each other.

#include <array>
#include <complex>
#include <vector>

#include "qaoalab/graph.hpp"
#include "qaoalab/simulator.hpp"

namespace dense {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;
using Matrix = std::vector<Vector>;

// Spin value of node `bit` in basis state z: +1 for 0, -1 for 1.
inline double spin(std::size_t z, int bit) { return (z >> bit) & 1u ? -1.0 : 1.0; }

// Independent energy recomputation via spin products.
inline double energy(const qaoalab::Graph& g, std::size_t z,
                     qaoalab::SignConvention convention) {
  const double sign = convention == qaoalab::SignConvention::maxcut ? 1.0 : -1.0;
  double e = 0.0;
  for (const qaoalab::Edge& edge : g.edges) {
    e += sign * edge.weight * spin(z, edge.u) * spin(z, edge.v);
  }
  return e;
}

// Embeds a single-qubit gate u (row-major [00, 01, 10, 11]) on qubit q: the
// matrix element <i|U|j> is u[i_q][j_q] when all other bits agree, else 0.
inline Matrix embed_one_qubit(const std::array<Complex, 4>& u, int q, int n) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t bit = std::size_t{1} << q;
  Matrix m(dim, Vector(dim, Complex(0.0, 0.0)));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if ((i & ~bit) != (j & ~bit)) continue;
      m[i][j] = u[((i >> q) & 1u) * 2 + ((j >> q) & 1u)];
    }
  }
  return m;
}

inline Vector matvec(const Matrix& m, const Vector& v) {
  Vector out(v.size(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  }
  return out;
}

inline Matrix mixer_gate_matrix(double beta, int q, int n) {
  const Complex c(std::cos(beta), 0.0);
  const Complex ms(0.0, -std::sin(beta));
  return embed_one_qubit({c, ms, ms, c}, q, n);
}

inline Vector run_ansatz(const qaoalab::Graph& g, const qaoalab::QaoaParams& params,
                         qaoalab::SignConvention convention) {
  const int n = g.n_nodes;
  const std::size_t dim = std::size_t{1} << n;
  Vector state(dim, Complex(1.0 / std::sqrt(double(dim)), 0.0));
  for (int k = 0; k < params.p(); ++k) {
    for (std::size_t z = 0; z < dim; ++z) {
      state[z] *= std::exp(Complex(0.0, -params.gammas[k] * energy(g, z, convention)));
    }
    for (int q = 0; q < n; ++q) {
      state = matvec(mixer_gate_matrix(params.betas[k], q, n), state);
    }
  }
  return state;
}

inline double expectation(const qaoalab::Graph& g, const Vector& state,
                          qaoalab::SignConvention convention) {
  double sum = 0.0;
  for (std::size_t z = 0; z < state.size(); ++z) {
    sum += std::norm(state[z]) * energy(g, z, convention);
  }
  return sum;
}

}  // namespace dense
