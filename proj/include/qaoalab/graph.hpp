#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace qaoalab {

/// Hard cap on instance size; statevectors above this would not fit in
/// a reasonable desktop memory budget.
inline constexpr int kMaxQubits = 24;

/// Thrown when an input value, config, or file violates a documented
/// invariant. The CLI maps this to a distinct exit code from runtime errors.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;
};

/// Undirected Max-Cut instance. Invariants (see validate()):
/// edges satisfy 0 <= u < v < n_nodes, are sorted and duplicate-free,
/// weights lie in (0, 1]; weighted == false forces every weight to 1.0.
struct Graph {
  int n_nodes = 0;
  bool weighted = false;
  std::vector<Edge> edges;

  double total_weight() const;
  /// Throws ValidationError naming the offending edge/field on the first
  /// violation found.
  void validate() const;
};

/// Exact Max-Cut optimum from enumeration.
struct CutResult {
  /// Character i is the side of node i ('0' or '1'); node 0 is fixed to '0'
  /// and ties resolve to the lexicographically smallest such string.
  std::string best_assignment;
  double max_cut_value = 0.0;
  /// Ground energy of the cut Hamiltonian: total_weight - 2 * max_cut_value.
  double e_min = 0.0;
  double total_weight = 0.0;
};

/// Connected Erdos-Renyi G(n, edge_prob) instance. Candidate topologies are
/// drawn until one is connected (attempt t uses sub-seed seed + (t << 32));
/// weighted graphs then draw uniform weights in (0, 1]. Throws
/// ValidationError for invalid arguments, std::runtime_error if no connected
/// candidate appears within 10000 attempts.
Graph generate_erdos_renyi(int n, double edge_prob, std::uint64_t seed, bool weighted);

/// BFS reachability from node 0. An empty graph (n == 0) is not connected;
/// a single node is.
bool is_connected(const Graph& g);

/// Cut weight of one assignment string (length n_nodes, chars '0'/'1').
double cut_value(const Graph& g, const std::string& assignment);

/// Enumerates the 2^(n-1) distinct bipartitions (node 0 fixed). Intended for
/// n <= kMaxQubits; throws ValidationError above that or for empty graphs.
CutResult brute_force_maxcut(const Graph& g);

/// JSON round trip: {"n_nodes": int, "weighted": bool,
/// "edges": [[u, v, weight], ...]}. load_graph validates and throws
/// ValidationError on malformed content.
void save_graph(const Graph& g, const std::filesystem::path& path);
Graph load_graph(const std::filesystem::path& path);

/// Canonical file name for a generated instance: "<n>_<seed>.json".
std::string graph_file_name(int n, std::uint64_t seed);

}  // namespace qaoalab
