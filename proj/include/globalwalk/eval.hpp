#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "globalwalk/embedding.hpp"
#include "globalwalk/graph.hpp"

namespace globalwalk {

// ---- community detection -------------------------------------------------

struct ClusterAssignment {
  std::vector<int> assignment;  ///< cluster id per row, in [0, k)
  int k = 0;
  double inertia = 0.0;
  /// Inertia after each assignment step of the winning restart.
  std::vector<double> inertia_history;
};

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
  double tolerance = 1e-6;  ///< stop when every centroid moves less than this
  unsigned threads = 1;
};

/// k-means++ seeding and Lloyd iterations, best of `restarts` by inertia
/// (ties go to the lowest restart index). Empty clusters are re-seeded with
/// the point farthest from its centroid.
ClusterAssignment kmeans(const Matrix& points, int k, std::uint64_t seed,
                         const KMeansOptions& options = {});

/// Fraction of nodes matched under the best cluster↔label bijection.
/// `predicted` and `truth` hold ids in [0, k).
double accuracy(std::span<const int> predicted, std::span<const int> truth, int k);
/// Requires clusters.k == labels.k and every clustered node labeled.
double accuracy(const ClusterAssignment& clusters, const LabelMap& labels);

/// k×k table: entry [c][l] counts nodes in cluster c with label l.
std::vector<std::vector<std::int64_t>> contingency_table(std::span<const int> predicted,
                                                         std::span<const int> truth, int k);

void write_assignments(const ClusterAssignment& clusters, const NodeNames& names,
                       const std::filesystem::path& path);

// ---- link prediction -----------------------------------------------------

struct LinkSplit {
  Graph train_graph;
  std::vector<Edge> pos_test;  ///< held-out edges of the original graph
  std::vector<Edge> neg_test;  ///< sampled non-edges of the original graph
};

/// Moves shuffled edges to the test set while both endpoints keep at least
/// one incident training edge, up to ceil(test_fraction·|E|), then samples
/// as many distinct non-edges. Directed graphs split arcs and count in- plus
/// out-degree.
LinkSplit split_edges(const Graph& g, double test_fraction, std::uint64_t seed);

/// 1 / (1 + ‖Φ(u) − Φ(v)‖₂).
double link_score(const Matrix& phi, NodeId u, NodeId v);

/// Pairwise AUC: fraction of (negative, positive) pairs with neg < pos.
/// Ties count 0, or 0.5 with tie_half_credit.
double auc(std::span<const double> pos_scores, std::span<const double> neg_scores,
           bool tie_half_credit = false);

// ---- reports -------------------------------------------------------------

struct EvalReport {
  std::string dataset;
  std::string task;    ///< "cd" | "lp"
  std::string method;  ///< "deepwalk" | "node2vec" | "globalwalk"
  std::string likelihood;
  std::string beta;
  std::uint64_t seed = 0;
  std::string metric;  ///< "ACC" | "AUC"
  double value = 0.0;
  double seconds = 0.0;
  /// Remaining run parameters in key order, emitted in the key=value form.
  std::vector<std::pair<std::string, std::string>> hyperparameters;

  static std::string csv_header();
  std::string to_csv_row() const;
  std::string to_key_value() const;
};

}  // namespace globalwalk
