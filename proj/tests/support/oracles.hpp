#pragma once

// Independent reference computations for tests. None of these call into the
// code paths they are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "globalwalk/graph.hpp"

namespace oracle {

using globalwalk::Edge;
using globalwalk::Graph;
using globalwalk::NodeId;
using globalwalk::NodeNames;

/// Graph over nodes named "0".."n-1" in index order.
inline Graph make_graph(std::size_t n, const std::vector<Edge>& edges, bool directed) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return Graph::from_edges(NodeNames(names), edges, directed);
}

/// Erdős–Rényi style edge list with edge probability `density`.
inline std::vector<Edge> random_edges(std::size_t n, double density, bool directed,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(density);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = directed ? 0 : u + 1; v < n; ++v) {
      if (u != v && coin(rng)) edges.emplace_back(u, v);
    }
  }
  return edges;
}

inline Graph random_graph(std::size_t n, double density, bool directed, std::uint64_t seed) {
  return make_graph(n, random_edges(n, density, directed, seed), directed);
}

/// Disjoint cliques of the given size, no edges between them.
inline Graph cliques(std::size_t count, std::size_t size) {
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = i + 1; j < size; ++j)
        edges.emplace_back(static_cast<NodeId>(c * size + i), static_cast<NodeId>(c * size + j));
    }
  }
  return make_graph(count * size, edges, false);
}

/// Planted-partition graph: p_in inside blocks, p_out across. Returns the
/// block id of every node through `blocks`.
inline Graph planted_partition(std::size_t block_count, std::size_t block_size, double p_in,
                               double p_out, std::uint64_t seed, std::vector<int>& blocks) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const std::size_t n = block_count * block_size;
  blocks.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) blocks[i] = static_cast<int>(i / block_size);
  std::vector<Edge> edges;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (u01(rng) < (blocks[a] == blocks[b] ? p_in : p_out)) edges.emplace_back(a, b);
    }
  }
  return make_graph(n, edges, false);
}

/// Shortest-path hop count from s to every node by BFS over out-edges,
/// computed from a plain adjacency-set copy.
inline std::vector<int> bfs_distances(const std::vector<std::set<NodeId>>& adj, NodeId s) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<NodeId> q;
  dist[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const NodeId x = q.front();
    q.pop();
    for (NodeId y : adj[x]) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
    }
  }
  return dist;
}

/// Adjacency sets straight from a raw edge list (self-loops skipped).
inline std::vector<std::set<NodeId>> adjacency_sets(std::size_t n, const std::vector<Edge>& edges,
                                                    bool directed) {
  std::vector<std::set<NodeId>> adj(n);
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    adj[u].insert(v);
    if (!directed) adj[v].insert(u);
  }
  return adj;
}

/// node2vec step distribution at `cur` arriving from `prev`, with α chosen
/// by the BFS distance d(prev, x), which is 0, 1 or 2 for any x ∈ N(cur).
/// Entries follow ascending neighbor order.
inline std::vector<double> node2vec_step(const std::vector<std::set<NodeId>>& adj, NodeId prev,
                                         NodeId cur, double p, double q) {
  const auto dist = bfs_distances(adj, prev);
  std::vector<double> w;
  for (NodeId x : adj[cur]) {
    const int d = dist[x];
    if (d == 0) w.push_back(1.0 / p);
    else if (d == 1) w.push_back(1.0);
    else w.push_back(1.0 / q);
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

/// max over all k! label permutations of matched node count, divided by N.
inline double brute_force_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth,
                                   int k) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
      hits += perm[static_cast<std::size_t>(predicted[i])] == truth[i];
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(predicted.size());
}

/// Σ 1[neg < pos] (+ ½ per tie) over all pairs, divided by the pair count.
inline double pairwise_auc(const std::vector<double>& pos, const std::vector<double>& neg,
                           bool half_ties = false) {
  double credit = 0.0;
  for (double p : pos) {
    for (double n : neg) {
      if (n < p) credit += 1.0;
      else if (half_ties && n == p) credit += 0.5;
    }
  }
  return credit / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

/// Central finite difference of f along coordinate i of x.
template <typename F>
double central_difference(F&& f, std::vector<double>& x, std::size_t i, double eps) {
  const double saved = x[i];
  x[i] = saved + eps;
  const double hi = f();
  x[i] = saved - eps;
  const double lo = f();
  x[i] = saved;
  return (hi - lo) / (2.0 * eps);
}

/// Skip-gram negative-sampling loss written out term by term.
inline double sgns_loss_reference(const std::vector<double>& center, const std::vector<double>& pos,
                                  const std::vector<std::vector<double>>& negs) {
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  auto log_sigmoid = [](double x) { return -std::log1p(std::exp(-x)); };
  double loss = -log_sigmoid(dot(pos, center));
  for (const auto& n : negs) loss -= log_sigmoid(-dot(n, center));
  return loss;
}

}  // namespace oracle
