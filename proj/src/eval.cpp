#include "globalwalk/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <thread>

#include "globalwalk/errors.hpp"
#include "globalwalk/hungarian.hpp"
#include "globalwalk/rng.hpp"

namespace globalwalk {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

struct Restart {
  std::vector<int> assignment;
  double inertia = 0.0;
  std::vector<double> history;
};

class Lloyd {
 public:
  Lloyd(const Matrix& points, int k) : points_(points), k_(k), centroids_(k, points.cols()) {}

  Restart run(Rng& rng, const KMeansOptions& options) {
    seed_plus_plus(rng);
    Restart out;
    out.assignment.assign(points_.rows(), 0);
    for (int it = 0; it < options.max_iterations; ++it) {
      out.history.push_back(assign(out.assignment));
      if (update(out.assignment) < options.tolerance) break;
    }
    out.inertia = assign(out.assignment);
    out.history.push_back(out.inertia);
    return out;
  }

 private:
  void seed_plus_plus(Rng& rng) {
    const std::size_t n = points_.rows();
    std::uniform_int_distribution<std::size_t> any(0, n - 1);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::size_t chosen = any(rng);
    for (int c = 0; c < k_; ++c) {
      std::copy_n(points_.row(chosen).begin(), points_.cols(), centroids_.row(static_cast<std::size_t>(c)).begin());
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d2[i] = std::min(d2[i], squared_distance(points_.row(i), centroids_.row(static_cast<std::size_t>(c))));
        total += d2[i];
      }
      if (c + 1 == k_) break;
      if (total <= 0.0) {
        chosen = any(rng);
        continue;
      }
      double target = uniform01(rng) * total;
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] > 0.0 && target < d2[i]) {
          chosen = i;
          break;
        }
        target -= d2[i];
      }
      // Rounding can leave target just past the end; take the last positive.
      while (d2[chosen] <= 0.0 && chosen > 0) --chosen;
    }
  }

  double assign(std::vector<int>& assignment) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < points_.rows(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k_; ++c) {
        const double d = squared_distance(points_.row(i), centroids_.row(static_cast<std::size_t>(c)));
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      assignment[i] = best_c;
      inertia += best;
    }
    return inertia;
  }

  // Recomputes centroids; returns the largest centroid displacement.
  double update(const std::vector<int>& assignment) {
    const std::size_t dim = points_.cols();
    Matrix next(static_cast<std::size_t>(k_), dim, 0.0);
    std::vector<std::size_t> counts(static_cast<std::size_t>(k_), 0);
    for (std::size_t i = 0; i < points_.rows(); ++i) {
      const auto c = static_cast<std::size_t>(assignment[i]);
      ++counts[c];
      auto row = next.row(c);
      const auto p = points_.row(i);
      for (std::size_t j = 0; j < dim; ++j) row[j] += p[j];
    }
    std::vector<char> taken(points_.rows(), 0);
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] == 0) continue;
      for (double& x : next.row(c)) x /= static_cast<double>(counts[c]);
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < points_.rows(); ++i) {
        if (taken[i]) continue;
        const double d =
            squared_distance(points_.row(i), next.row(static_cast<std::size_t>(assignment[i])));
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      taken[far] = 1;
      std::copy_n(points_.row(far).begin(), dim, next.row(c).begin());
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < counts.size(); ++c)
      shift = std::max(shift, std::sqrt(squared_distance(next.row(c), centroids_.row(c))));
    centroids_ = std::move(next);
    return shift;
  }

  const Matrix& points_;
  int k_;
  Matrix centroids_;
};

}  // namespace

ClusterAssignment kmeans(const Matrix& points, int k, std::uint64_t seed,
                         const KMeansOptions& options) {
  require(k >= 1, "k must be >= 1");
  if (static_cast<std::size_t>(k) > points.rows())
    throw Error("k=" + std::to_string(k) + " exceeds the number of points (" +
                std::to_string(points.rows()) + ")");
  require(options.restarts >= 1 && options.max_iterations >= 1, "invalid k-means options");

  std::vector<Restart> results(static_cast<std::size_t>(options.restarts));
  auto run_restart = [&](int r) {
    Rng rng = make_rng(derive_seed(seed, Stream::KMeans, {static_cast<std::uint64_t>(r)}));
    results[static_cast<std::size_t>(r)] = Lloyd(points, k).run(rng, options);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(options.restarts)));
  if (threads == 1) {
    for (int r = 0; r < options.restarts; ++r) run_restart(r);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int r = static_cast<int>(t); r < options.restarts; r += static_cast<int>(threads)) run_restart(r);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].inertia < results[best].inertia) best = r;
  }
  return ClusterAssignment{std::move(results[best].assignment), k, results[best].inertia,
                           std::move(results[best].history)};
}

std::vector<std::vector<std::int64_t>> contingency_table(std::span<const int> predicted,
                                                         std::span<const int> truth, int k) {
  require(predicted.size() == truth.size(), "predicted and truth sizes differ");
  require(k >= 1, "k must be >= 1");
  std::vector<std::vector<std::int64_t>> table(static_cast<std::size_t>(k),
                                               std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    require(predicted[i] >= 0 && predicted[i] < k, "cluster id out of range");
    require(truth[i] >= 0 && truth[i] < k, "label id out of range");
    ++table[static_cast<std::size_t>(predicted[i])][static_cast<std::size_t>(truth[i])];
  }
  return table;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth, int k) {
  require(!predicted.empty(), "accuracy needs at least one node");
  const auto table = contingency_table(predicted, truth, k);
  const auto matching = max_weight_assignment(table);
  return static_cast<double>(assignment_weight(table, matching)) /
         static_cast<double>(predicted.size());
}

double accuracy(const ClusterAssignment& clusters, const LabelMap& labels) {
  if (clusters.k != labels.k()) {
    throw Error("cluster count " + std::to_string(clusters.k) + " does not match label count " +
                std::to_string(labels.k()));
  }
  if (clusters.assignment.size() != labels.labels.size())
    throw Error("assignment covers a different node set than the labels");
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    if (labels.labels[i] == LabelMap::kUnlabeled)
      throw Error("node index " + std::to_string(i) + " is clustered but unlabeled");
  }
  return accuracy(clusters.assignment, labels.labels, clusters.k);
}

void write_assignments(const ClusterAssignment& clusters, const NodeNames& names,
                       const std::filesystem::path& path) {
  require(clusters.assignment.size() == names.size(), "assignment size does not match names");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "node_id,cluster_id\n";
  for (std::size_t i = 0; i < names.size(); ++i)
    out << names.name(static_cast<NodeId>(i)) << ',' << clusters.assignment[i] << '\n';
}

LinkSplit split_edges(const Graph& g, double test_fraction, std::uint64_t seed) {
  require(test_fraction > 0.0 && test_fraction < 1.0, "test_fraction must lie in (0, 1)");
  const std::size_t n = g.node_count();
  std::vector<Edge> edges = g.edges();
  if (edges.empty()) throw Error("graph has no edges to split");

  std::vector<std::size_t> degree(n, 0);
  for (const auto& [u, v] : edges) {
    ++degree[u];
    ++degree[v];
  }

  Rng rng = make_rng(derive_seed(seed, Stream::Split));
  std::shuffle(edges.begin(), edges.end(), rng);
  const auto target = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(edges.size())));

  LinkSplit split;
  std::vector<Edge> train;
  train.reserve(edges.size());
  for (const auto& e : edges) {
    const auto [u, v] = e;
    if (split.pos_test.size() < target && degree[u] > 1 && degree[v] > 1) {
      --degree[u];
      --degree[v];
      split.pos_test.push_back(e);
    } else {
      train.push_back(e);
    }
  }
  if (split.pos_test.empty())
    throw Error("no edge can be held out without isolating an endpoint");

  const std::size_t pairs = g.directed() ? n * (n - 1) : n * (n - 1) / 2;
  const std::size_t available = pairs - edges.size();
  const std::size_t wanted = split.pos_test.size();
  if (available < wanted) {
    throw Error("graph too dense for non-edge sampling: " + std::to_string(available) +
                " non-edges, need " + std::to_string(wanted));
  }
  std::set<Edge> seen;
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  const std::size_t max_attempts = 100 * wanted;
  for (std::size_t attempt = 0; attempt < max_attempts && split.neg_test.size() < wanted; ++attempt) {
    NodeId u = pick(rng);
    NodeId v = pick(rng);
    if (u == v || g.has_edge(u, v)) continue;
    if (!g.directed() && u > v) std::swap(u, v);
    if (seen.insert({u, v}).second) split.neg_test.emplace_back(u, v);
  }
  if (split.neg_test.size() < wanted) {
    throw Error("graph too dense for non-edge sampling: found " +
                std::to_string(split.neg_test.size()) + " of " + std::to_string(wanted) +
                " non-edges in " + std::to_string(max_attempts) + " attempts");
  }
  split.train_graph = Graph::from_edges(g.names(), train, g.directed());
  return split;
}

double link_score(const Matrix& phi, NodeId u, NodeId v) {
  require(u < phi.rows() && v < phi.rows(), "node index out of range");
  return 1.0 / (1.0 + euclidean_distance(phi.row(u), phi.row(v)));
}

double auc(std::span<const double> pos_scores, std::span<const double> neg_scores,
           bool tie_half_credit) {
  if (pos_scores.empty() || neg_scores.empty()) throw Error("AUC needs non-empty score lists");
  std::vector<double> neg(neg_scores.begin(), neg_scores.end());
  std::sort(neg.begin(), neg.end());
  std::uint64_t below = 0;
  std::uint64_t ties = 0;
  for (double p : pos_scores) {
    const auto lo = std::lower_bound(neg.begin(), neg.end(), p);
    const auto hi = std::upper_bound(lo, neg.end(), p);
    below += static_cast<std::uint64_t>(lo - neg.begin());
    ties += static_cast<std::uint64_t>(hi - lo);
  }
  const double credit = static_cast<double>(below) + (tie_half_credit ? 0.5 * static_cast<double>(ties) : 0.0);
  return credit / (static_cast<double>(pos_scores.size()) * static_cast<double>(neg.size()));
}

namespace {

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

std::string EvalReport::csv_header() {
  return "dataset,task,method,likelihood,beta,seed,metric,value,seconds";
}

std::string EvalReport::to_csv_row() const {
  return dataset + ',' + task + ',' + method + ',' + likelihood + ',' + beta + ',' +
         std::to_string(seed) + ',' + metric + ',' + fixed(value, 6) + ',' + fixed(seconds, 3);
}

std::string EvalReport::to_key_value() const {
  std::string out = "dataset=" + dataset + " task=" + task + " method=" + method +
                    " likelihood=" + likelihood + " beta=" + beta + " seed=" + std::to_string(seed) +
                    " metric=" + metric + " value=" + fixed(value, 6) + " seconds=" + fixed(seconds, 3);
  for (const auto& [k, v] : hyperparameters) out += ' ' + k + '=' + v;
  return out;
}

}  // namespace globalwalk
