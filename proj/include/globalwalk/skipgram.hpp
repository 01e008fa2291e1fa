#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "globalwalk/alias_table.hpp"
#include "globalwalk/embedding.hpp"
#include "globalwalk/walk.hpp"

namespace globalwalk {

struct TrainConfig {
  int window = 10;
  int negatives = 5;
  double lr_start = 0.025;
  double lr_end = 1e-4;
  double noise_power = 0.75;

  void validate() const;
  bool operator==(const TrainConfig& other) const = default;
};

using ContextPair = std::pair<NodeId, NodeId>;  // (center, context)

/// Every (walk[i], walk[j]) with 0 < |i-j| <= window, center-major order.
std::vector<ContextPair> context_pairs(std::span<const NodeId> walk, int window);
std::size_t count_context_pairs(std::size_t walk_length, int window);
std::size_t count_context_pairs(const Corpus& corpus, int window);

/// Negative-sampling distribution ∝ (corpus frequency)^power.
class NoiseTable {
 public:
  NoiseTable(const Corpus& corpus, std::size_t node_count, double power);
  NoiseTable(std::span<const double> weights);

  NodeId sample(Rng& rng) const { return static_cast<NodeId>(table_.sample(rng)); }
  double probability(NodeId node) const { return table_.probability(node); }
  std::size_t size() const { return table_.size(); }

 private:
  AliasTable table_;
};

/// L = -log σ(o_c·x) - Σ_n log σ(-o_n·x) for input vector x, positive
/// context vector o_c and negative context vectors o_n.
double sgns_loss(std::span<const double> center, std::span<const double> context,
                 std::span<const std::span<const double>> negatives);

/// One SGD step of sgns_loss on Φ row `center` and context rows `context`
/// and `negatives`, all gradients taken at the pre-step point. Returns the
/// loss before the step; throws NumericalError if it is not finite.
double sgns_step(EmbeddingMatrix& emb, NodeId center, NodeId context,
                 std::span<const NodeId> negatives, double lr);

struct TrainStats {
  std::size_t pairs = 0;
  double loss_sum = 0.0;

  double mean_loss() const { return pairs == 0 ? 0.0 : loss_sum / static_cast<double>(pairs); }
};

/// Sequential SGNS trainer. The learning rate decays linearly from
/// lr(fraction_begin) to lr(fraction_end) over `total_pairs` updates, where
/// lr(f) = lr_start - (lr_start - lr_end)·f, and state (rng, pair counter)
/// carries across train() calls.
class SkipGramTrainer {
 public:
  SkipGramTrainer(const TrainConfig& config, NoiseTable noise, std::size_t total_pairs,
                  double fraction_begin, double fraction_end, std::uint64_t seed);

  TrainStats train(const Corpus& corpus, EmbeddingMatrix& emb);
  TrainStats train(std::span<const Walk> walks, EmbeddingMatrix& emb);
  double current_lr() const;
  std::size_t processed() const { return processed_; }

 private:
  TrainConfig config_;
  NoiseTable noise_;
  std::size_t total_pairs_;
  double fraction_begin_;
  double fraction_end_;
  Rng rng_;
  std::size_t processed_ = 0;
  std::vector<NodeId> negatives_;
};

/// One pass over the corpus with a noise table built from it. With
/// threads > 1 the walks are split across threads that update the matrices
/// without synchronization; results then vary run to run.
TrainStats train_epoch(const Corpus& corpus, EmbeddingMatrix& emb, const TrainConfig& config,
                       double fraction_begin, double fraction_end, std::uint64_t seed,
                       unsigned threads = 1);

/// Exact softmax exp(o_v·x_u) / Σ_w exp(o_w·x_u). Enumerates all nodes.
double softmax_prob(const EmbeddingMatrix& emb, NodeId u, NodeId v);

}  // namespace globalwalk
