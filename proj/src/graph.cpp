#include "qaoalab/graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include "json.hpp"
#include "qaoalab/rng.hpp"

namespace qaoalab {

double Graph::total_weight() const {
  double sum = 0.0;
  for (const Edge& e : edges) sum += e.weight;
  return sum;
}

void Graph::validate() const {
  if (n_nodes < 0) throw ValidationError("graph: n_nodes must be non-negative");
  if (n_nodes > kMaxQubits) {
    throw ValidationError("graph: n_nodes " + std::to_string(n_nodes) +
                          " exceeds the supported maximum " + std::to_string(kMaxQubits));
  }
  const Edge* prev = nullptr;
  for (const Edge& e : edges) {
    std::ostringstream where;
    where << "graph: edge (" << e.u << ", " << e.v << ")";
    if (e.u < 0 || e.v < 0 || e.u >= n_nodes || e.v >= n_nodes) {
      throw ValidationError(where.str() + " has an endpoint outside [0, n_nodes)");
    }
    if (e.u >= e.v) throw ValidationError(where.str() + " must satisfy u < v");
    if (prev != nullptr) {
      if (prev->u > e.u || (prev->u == e.u && prev->v > e.v)) {
        throw ValidationError(where.str() + " breaks the sorted edge order");
      }
      if (prev->u == e.u && prev->v == e.v) {
        throw ValidationError(where.str() + " is a duplicate");
      }
    }
    if (weighted) {
      if (!(e.weight > 0.0) || e.weight > 1.0) {
        throw ValidationError(where.str() + " weight must lie in (0, 1]");
      }
    } else if (e.weight != 1.0) {
      throw ValidationError(where.str() + " weight must be 1 in an unweighted graph");
    }
    prev = &e;
  }
}

Graph generate_erdos_renyi(int n, double edge_prob, std::uint64_t seed, bool weighted) {
  if (n < 1 || n > kMaxQubits) {
    throw ValidationError("generate_erdos_renyi: n must lie in [1, " +
                          std::to_string(kMaxQubits) + "]");
  }
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw ValidationError("generate_erdos_renyi: edge_prob must lie in [0, 1]");
  }
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint64_t sub_seed =
        seed + (static_cast<std::uint64_t>(attempt) << 32);
    SplitMix64 topology = derive_stream(sub_seed, 0);
    Graph g;
    g.n_nodes = n;
    g.weighted = weighted;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (topology.next_double() < edge_prob) g.edges.push_back({u, v, 1.0});
      }
    }
    if (!is_connected(g)) continue;
    if (weighted) {
      SplitMix64 weights = derive_stream(sub_seed, 1);
      for (Edge& e : g.edges) e.weight = weights.next_open01();
    }
    g.validate();
    return g;
  }
  std::ostringstream msg;
  msg << "generate_erdos_renyi: no connected graph within " << kMaxAttempts
      << " attempts (n=" << n << ", edge_prob=" << edge_prob << ", seed=" << seed
      << ")";
  throw std::runtime_error(msg.str());
}

bool is_connected(const Graph& g) {
  if (g.n_nodes == 0) return false;
  std::vector<std::vector<int>> adj(g.n_nodes);
  for (const Edge& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> seen(g.n_nodes, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == g.n_nodes;
}

double cut_value(const Graph& g, const std::string& assignment) {
  if (static_cast<int>(assignment.size()) != g.n_nodes) {
    throw ValidationError("cut_value: assignment length must equal n_nodes");
  }
  double cut = 0.0;
  for (const Edge& e : g.edges) {
    if (assignment[e.u] != assignment[e.v]) cut += e.weight;
  }
  return cut;
}

namespace {

// Key whose numeric order equals the lexicographic order of the assignment
// string: node i contributes to bit (n - 1 - i).
std::uint32_t lexicographic_key(std::uint32_t mask, int n) {
  std::uint32_t key = 0;
  for (int i = 1; i < n; ++i) {
    if (mask & (1u << (i - 1))) key |= 1u << (n - 1 - i);
  }
  return key;
}

}  // namespace

CutResult brute_force_maxcut(const Graph& g) {
  g.validate();
  if (g.n_nodes < 1) throw ValidationError("brute_force_maxcut: graph has no nodes");
  const int n = g.n_nodes;
  // Node 0 stays on side 0: each bipartition appears exactly once among the
  // 2^(n-1) masks, mask bit (i-1) giving the side of node i.
  const std::uint32_t mask_count = 1u << (n - 1);
  double best_cut = -1.0;
  std::uint32_t best_mask = 0;
  std::uint32_t best_key = 0;
  for (std::uint32_t mask = 0; mask < mask_count; ++mask) {
    double cut = 0.0;
    for (const Edge& e : g.edges) {
      const std::uint32_t su = (e.u == 0) ? 0u : ((mask >> (e.u - 1)) & 1u);
      const std::uint32_t sv = (mask >> (e.v - 1)) & 1u;
      if (su != sv) cut += e.weight;
    }
    if (cut > best_cut) {
      best_cut = cut;
      best_mask = mask;
      best_key = lexicographic_key(mask, n);
    } else if (cut == best_cut) {
      const std::uint32_t key = lexicographic_key(mask, n);
      if (key < best_key) {
        best_mask = mask;
        best_key = key;
      }
    }
  }
  CutResult result;
  result.best_assignment.assign(static_cast<std::size_t>(n), '0');
  for (int i = 1; i < n; ++i) {
    if (best_mask & (1u << (i - 1))) result.best_assignment[i] = '1';
  }
  result.max_cut_value = best_cut;
  result.total_weight = g.total_weight();
  result.e_min = result.total_weight - 2.0 * best_cut;
  return result;
}

void save_graph(const Graph& g, const std::filesystem::path& path) {
  g.validate();
  nlohmann::json j;
  j["n_nodes"] = g.n_nodes;
  j["weighted"] = g.weighted;
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges) edges.push_back({e.u, e.v, e.weight});
  j["edges"] = std::move(edges);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_graph: cannot open " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("save_graph: write failed for " + path.string());
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("load_graph: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("load_graph: " + path.string() + ": " + e.what());
  }
  Graph g;
  try {
    g.n_nodes = j.at("n_nodes").get<int>();
    g.weighted = j.at("weighted").get<bool>();
    for (const auto& item : j.at("edges")) {
      if (!item.is_array() || item.size() != 3) {
        throw ValidationError("load_graph: each edge must be [u, v, weight]");
      }
      g.edges.push_back({item[0].get<int>(), item[1].get<int>(), item[2].get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("load_graph: " + path.string() + ": " + e.what());
  }
  try {
    g.validate();
  } catch (const ValidationError& e) {
    throw ValidationError("load_graph: " + path.string() + ": " + e.what());
  }
  return g;
}

std::string graph_file_name(int n, std::uint64_t seed) {
  return std::to_string(n) + "_" + std::to_string(seed) + ".json";
}

}  // namespace qaoalab
