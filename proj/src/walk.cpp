#include "globalwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <thread>

#include "globalwalk/errors.hpp"

namespace globalwalk {

std::string_view to_string(Likelihood kind) {
  switch (kind) {
    case Likelihood::Inverse: return "inv";
    case Likelihood::Threshold: return "thr";
    case Likelihood::ShiftedExp: return "exp";
  }
  return "?";
}

Likelihood parse_likelihood(std::string_view text) {
  if (text == "inv") return Likelihood::Inverse;
  if (text == "thr") return Likelihood::Threshold;
  if (text == "exp") return Likelihood::ShiftedExp;
  throw Error("unknown likelihood '" + std::string(text) + "' (expected inv, thr or exp)");
}

double likelihood_weight(Likelihood kind, double xi, const LikelihoodConstants& k) {
  require(xi >= 0.0 && xi <= 1.0, "normalized distance outside [0, 1]");
  switch (kind) {
    case Likelihood::Inverse: return xi > k.eps_inv ? 1.0 / xi : 1.0 / k.eps_inv;
    case Likelihood::Threshold: return xi > k.eps_thr ? k.eps_thr : 1.0 / k.eps_thr;
    case Likelihood::ShiftedExp: return std::max(k.exp_shift - std::exp(xi), k.exp_floor);
  }
  return 0.0;
}

double AnnealSchedule::mixture_weight(int epoch) const {
  require(epoch >= 0, "epoch must be >= 0");
  require(beta >= 0.0, "beta must be >= 0");
  require(lambda_max > 0.0 && lambda_max <= 1.0, "lambda_max must lie in (0, 1]");
  return std::min(static_cast<double>(epoch) * beta, lambda_max);
}

namespace {

std::span<const NodeId> checked_neighbors(const Graph& g, NodeId u) {
  auto nb = g.neighbors(u);
  if (nb.empty()) throw Error("dead end at node " + std::to_string(u));
  return nb;
}

void normalize(std::vector<double>& w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
}

NodeId uniform_step(std::span<const NodeId> nb, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
  return nb[pick(rng)];
}

// Walks from `start`, asking `next` for each step until the length is
// reached or the current node has no out-neighbors.
template <typename Next>
Walk walk_with(const Graph& g, NodeId start, std::size_t length, Next&& next) {
  require(start < g.node_count(), "start node out of range");
  require(length >= 1, "walk length must be >= 1");
  Walk walk;
  walk.reserve(length);
  walk.push_back(start);
  while (walk.size() < length) {
    const auto nb = g.neighbors(walk.back());
    if (nb.empty()) break;
    walk.push_back(next(walk, nb));
  }
  return walk;
}

}  // namespace

std::vector<double> uniform_distribution(const Graph& g, NodeId u) {
  const auto nb = checked_neighbors(g, u);
  return std::vector<double>(nb.size(), 1.0 / static_cast<double>(nb.size()));
}

std::vector<double> bias_distribution(const Graph& g, const Matrix& phi, NodeId u, Likelihood kind) {
  checked_neighbors(g, u);
  std::vector<double> w = normalized_distances(g, phi, u);
  for (double& x : w) x = likelihood_weight(kind, x);
  normalize(w);
  return w;
}

std::vector<double> annealed_distribution(const Graph& g, const Matrix& phi, NodeId u, int epoch,
                                          const AnnealSchedule& schedule, Likelihood kind) {
  const double lambda = schedule.mixture_weight(epoch);
  std::vector<double> probs = uniform_distribution(g, u);
  if (lambda == 0.0) return probs;
  const std::vector<double> bias = bias_distribution(g, phi, u, kind);
  for (std::size_t i = 0; i < probs.size(); ++i)
    probs[i] = (1.0 - lambda) * probs[i] + lambda * bias[i];
  return probs;
}

std::vector<double> node2vec_distribution(const Graph& g, NodeId previous, NodeId current,
                                          const Node2vecParams& params) {
  require(params.p > 0.0 && params.q > 0.0, "node2vec p and q must be > 0");
  const auto nb = checked_neighbors(g, current);
  std::vector<double> w(nb.size());
  for (std::size_t i = 0; i < nb.size(); ++i) {
    const NodeId x = nb[i];
    if (x == previous) {
      w[i] = 1.0 / params.p;
    } else if (g.has_edge(previous, x)) {
      w[i] = 1.0;
    } else {
      w[i] = 1.0 / params.q;
    }
  }
  normalize(w);
  return w;
}

std::size_t sample_index(std::span<const double> probs, Rng& rng) {
  require(!probs.empty(), "cannot sample from an empty distribution");
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return probs.size() - 1;
}

Walk uniform_walk(const Graph& g, NodeId start, std::size_t length, Rng& rng) {
  return walk_with(g, start, length,
                   [&](const Walk&, std::span<const NodeId> nb) { return uniform_step(nb, rng); });
}

Walk node2vec_walk(const Graph& g, NodeId start, std::size_t length, const Node2vecParams& params,
                   Rng& rng) {
  require(params.p > 0.0 && params.q > 0.0, "node2vec p and q must be > 0");
  return walk_with(g, start, length, [&](const Walk& walk, std::span<const NodeId> nb) {
    if (walk.size() == 1) return uniform_step(nb, rng);
    const auto probs = node2vec_distribution(g, walk[walk.size() - 2], walk.back(), params);
    return nb[sample_index(probs, rng)];
  });
}

Walk global_walk(const Graph& g, const Matrix& phi, NodeId start, std::size_t length, int epoch,
                 const AnnealSchedule& schedule, Likelihood kind, Rng& rng) {
  if (schedule.mixture_weight(epoch) == 0.0) return uniform_walk(g, start, length, rng);
  return walk_with(g, start, length, [&](const Walk& walk, std::span<const NodeId> nb) {
    const auto probs = annealed_distribution(g, phi, walk.back(), epoch, schedule, kind);
    return nb[sample_index(probs, rng)];
  });
}

namespace {

template <typename Fn>
void run_parallel(unsigned threads, Fn&& fn) {
  if (threads <= 1) {
    fn(0u);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(fn, t);
  for (auto& th : pool) th.join();
}

// Per-epoch GlobalWalk transition table: the annealed distribution of every
// node, laid out parallel to the graph's adjacency. Equivalent to computing
// annealed_distribution at each step since the snapshot is frozen.
class AnnealedTable {
 public:
  AnnealedTable(const Graph& g, const Matrix& phi, const GlobalWalkPolicy& policy, unsigned threads)
      : offsets_(g.node_count() + 1, 0) {
    for (NodeId u = 0; u < g.node_count(); ++u) offsets_[u + 1] = offsets_[u] + g.degree(u);
    probs_.resize(offsets_.back());
    auto fill = [&](unsigned tid) {
      for (NodeId u = tid; u < g.node_count(); u += threads) {
        if (g.degree(u) == 0) continue;
        const auto p =
            annealed_distribution(g, phi, u, policy.epoch, policy.schedule, policy.kind);
        std::copy(p.begin(), p.end(), probs_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]));
      }
    };
    run_parallel(threads, fill);
  }

  std::span<const double> at(NodeId u) const {
    return {probs_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<double> probs_;
};

}  // namespace

Corpus generate_corpus(const Graph& g, const WalkPolicy& policy, const CorpusOptions& options,
                       const Matrix* snapshot) {
  require(options.walks_per_node >= 1, "walks per node must be >= 1");
  require(options.walk_length >= 1, "walk length must be >= 1");
  const std::size_t n = g.node_count();
  const unsigned threads = std::max(1u, options.threads);

  std::unique_ptr<AnnealedTable> table;
  if (const auto* gw = std::get_if<GlobalWalkPolicy>(&policy)) {
    if (gw->schedule.mixture_weight(gw->epoch) > 0.0) {
      require(snapshot != nullptr, "GlobalWalk needs an embedding snapshot");
      require(snapshot->rows() == n, "snapshot rows do not match graph");
      table = std::make_unique<AnnealedTable>(g, *snapshot, *gw, threads);
    }
  }

  Corpus corpus;
  corpus.walks_per_node = options.walks_per_node;
  corpus.walk_length = options.walk_length;
  corpus.walks.resize(options.walks_per_node * n);

  std::vector<NodeId> order(n);
  std::vector<NodeId> starts(corpus.walks.size());
  for (std::size_t round = 0; round < options.walks_per_node; ++round) {
    std::iota(order.begin(), order.end(), NodeId{0});
    Rng shuffle_rng = make_rng(derive_seed(options.seed, Stream::WalkOrder, {round}));
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    std::copy(order.begin(), order.end(), starts.begin() + static_cast<std::ptrdiff_t>(round * n));
  }

  auto work = [&](unsigned tid) {
    for (std::size_t i = tid; i < starts.size(); i += threads) {
      const std::size_t round = i / n;
      const NodeId start = starts[i];
      Rng rng = make_rng(derive_seed(options.seed, Stream::Walk, {round, start}));
      Walk walk;
      // GlobalWalk without a table has λ = 0 and is the uniform walker.
      if (std::holds_alternative<UniformPolicy>(policy) ||
          (std::holds_alternative<GlobalWalkPolicy>(policy) && !table)) {
        walk = uniform_walk(g, start, options.walk_length, rng);
      } else if (const auto* nv = std::get_if<Node2vecPolicy>(&policy)) {
        walk = node2vec_walk(g, start, options.walk_length, nv->params, rng);
      } else {
        walk = walk_with(g, start, options.walk_length,
                         [&](const Walk& w, std::span<const NodeId> nb) {
                           return nb[sample_index(table->at(w.back()), rng)];
                         });
      }
      corpus.walks[i] = std::move(walk);
    }
  };
  run_parallel(threads, work);
  return corpus;
}

std::string format_corpus(const Corpus& corpus, const NodeNames& names) {
  std::string out;
  for (const auto& walk : corpus.walks) {
    for (std::size_t i = 0; i < walk.size(); ++i) {
      if (i) out += ' ';
      out += names.name(walk[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace globalwalk
