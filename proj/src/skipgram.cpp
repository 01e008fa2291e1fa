#include "globalwalk/skipgram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "globalwalk/errors.hpp"

namespace globalwalk {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

}  // namespace

void TrainConfig::validate() const {
  require(window >= 1, "window must be >= 1");
  require(negatives >= 1, "negatives must be >= 1");
  require(lr_end > 0.0 && lr_start > lr_end, "need lr_start > lr_end > 0");
  require(noise_power >= 0.0, "noise_power must be >= 0");
}

std::vector<ContextPair> context_pairs(std::span<const NodeId> walk, int window) {
  require(window >= 1, "window must be >= 1");
  std::vector<ContextPair> pairs;
  const auto n = static_cast<std::ptrdiff_t>(walk.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, i - window);
    const auto hi = std::min<std::ptrdiff_t>(n - 1, i + window);
    for (auto j = lo; j <= hi; ++j) {
      if (j != i) pairs.emplace_back(walk[static_cast<std::size_t>(i)], walk[static_cast<std::size_t>(j)]);
    }
  }
  return pairs;
}

std::size_t count_context_pairs(std::size_t walk_length, int window) {
  const auto w = static_cast<std::size_t>(window);
  std::size_t total = 0;
  for (std::size_t i = 0; i < walk_length; ++i)
    total += std::min(i, w) + std::min(walk_length - 1 - i, w);
  return total;
}

std::size_t count_context_pairs(const Corpus& corpus, int window) {
  std::size_t total = 0;
  for (const auto& walk : corpus.walks) total += count_context_pairs(walk.size(), window);
  return total;
}

namespace {

std::vector<double> noise_weights(const Corpus& corpus, std::size_t node_count, double power) {
  std::vector<double> counts(node_count, 0.0);
  for (const auto& walk : corpus.walks) {
    for (NodeId v : walk) {
      require(v < node_count, "corpus node out of range");
      counts[v] += 1.0;
    }
  }
  for (double& c : counts) c = c > 0.0 ? std::pow(c, power) : 0.0;
  return counts;
}

}  // namespace

NoiseTable::NoiseTable(const Corpus& corpus, std::size_t node_count, double power)
    : table_(noise_weights(corpus, node_count, power)) {}

NoiseTable::NoiseTable(std::span<const double> weights) : table_(weights) {}

double sgns_loss(std::span<const double> center, std::span<const double> context,
                 std::span<const std::span<const double>> negatives) {
  double loss = softplus(-dot(center, context));
  for (const auto& neg : negatives) loss += softplus(dot(center, neg));
  return loss;
}

double sgns_step(EmbeddingMatrix& emb, NodeId center, NodeId context,
                 std::span<const NodeId> negatives, double lr) {
  thread_local std::vector<double> grad_center;
  thread_local std::vector<double> coeff;
  const std::size_t dim = emb.dim();
  auto x = emb.input.row(center);
  grad_center.assign(dim, 0.0);
  coeff.resize(negatives.size() + 1);

  double loss = 0.0;
  for (std::size_t t = 0; t <= negatives.size(); ++t) {
    const NodeId target = t == 0 ? context : negatives[t - 1];
    const auto o = emb.context.row(target);
    const double score = dot(x, o);
    const double label = t == 0 ? 1.0 : 0.0;
    loss += t == 0 ? softplus(-score) : softplus(score);
    coeff[t] = sigmoid(score) - label;  // dL/dscore
    for (std::size_t i = 0; i < dim; ++i) grad_center[i] += coeff[t] * o[i];
  }
  if (!std::isfinite(loss)) {
    std::ostringstream msg;
    msg << "non-finite skip-gram loss (center=" << center << ", context=" << context
        << ", lr=" << lr << ")";
    throw NumericalError(msg.str());
  }
  for (std::size_t t = 0; t <= negatives.size(); ++t) {
    auto o = emb.context.row(t == 0 ? context : negatives[t - 1]);
    const double step = lr * coeff[t];
    for (std::size_t i = 0; i < dim; ++i) o[i] -= step * x[i];
  }
  for (std::size_t i = 0; i < dim; ++i) x[i] -= lr * grad_center[i];
  return loss;
}

SkipGramTrainer::SkipGramTrainer(const TrainConfig& config, NoiseTable noise,
                                 std::size_t total_pairs, double fraction_begin,
                                 double fraction_end, std::uint64_t seed)
    : config_(config),
      noise_(std::move(noise)),
      total_pairs_(total_pairs),
      fraction_begin_(fraction_begin),
      fraction_end_(fraction_end),
      rng_(make_rng(seed)) {
  config_.validate();
  require(0.0 <= fraction_begin && fraction_begin <= fraction_end && fraction_end <= 1.0,
          "need 0 <= fraction_begin <= fraction_end <= 1");
  negatives_.reserve(static_cast<std::size_t>(config_.negatives));
}

double SkipGramTrainer::current_lr() const {
  double progress = total_pairs_ == 0
                        ? 0.0
                        : static_cast<double>(processed_) / static_cast<double>(total_pairs_);
  progress = std::min(progress, 1.0);
  const double fraction = fraction_begin_ + (fraction_end_ - fraction_begin_) * progress;
  return config_.lr_start - (config_.lr_start - config_.lr_end) * fraction;
}

TrainStats SkipGramTrainer::train(const Corpus& corpus, EmbeddingMatrix& emb) {
  return train(std::span<const Walk>(corpus.walks), emb);
}

TrainStats SkipGramTrainer::train(std::span<const Walk> walks, EmbeddingMatrix& emb) {
  constexpr int kMaxResample = 100;
  require(emb.rows() == noise_.size(), "noise table size does not match embeddings");
  TrainStats stats;
  for (const auto& walk : walks) {
    const auto n = static_cast<std::ptrdiff_t>(walk.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const NodeId center = walk[static_cast<std::size_t>(i)];
      const auto lo = std::max<std::ptrdiff_t>(0, i - config_.window);
      const auto hi = std::min<std::ptrdiff_t>(n - 1, i + config_.window);
      for (auto j = lo; j <= hi; ++j) {
        if (j == i) continue;
        const NodeId context = walk[static_cast<std::size_t>(j)];
        negatives_.clear();
        for (int k = 0; k < config_.negatives; ++k) {
          for (int attempt = 0; attempt < kMaxResample; ++attempt) {
            const NodeId neg = noise_.sample(rng_);
            if (neg != context) {
              negatives_.push_back(neg);
              break;
            }
          }
        }
        stats.loss_sum += sgns_step(emb, center, context, negatives_, current_lr());
        ++stats.pairs;
        ++processed_;
      }
    }
  }
  return stats;
}

TrainStats train_epoch(const Corpus& corpus, EmbeddingMatrix& emb, const TrainConfig& config,
                       double fraction_begin, double fraction_end, std::uint64_t seed,
                       unsigned threads) {
  require(!corpus.walks.empty(), "corpus must be non-empty");
  NoiseTable noise(corpus, emb.rows(), config.noise_power);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(corpus.walks.size())));
  if (threads == 1) {
    SkipGramTrainer trainer(config, std::move(noise), count_context_pairs(corpus, config.window),
                            fraction_begin, fraction_end, derive_seed(seed, Stream::Train, {0}));
    return trainer.train(corpus, emb);
  }

  // Unsynchronized parallel updates over contiguous chunks of walks.
  std::vector<TrainStats> partial(threads);
  std::vector<std::thread> pool;
  const std::size_t chunk = (corpus.walks.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(corpus.walks.size(), t * chunk);
    const std::size_t end = std::min(corpus.walks.size(), begin + chunk);
    pool.emplace_back([&, t, begin, end] {
      std::span<const Walk> part(corpus.walks.data() + begin, end - begin);
      std::size_t pairs = 0;
      for (const auto& w : part) pairs += count_context_pairs(w.size(), config.window);
      SkipGramTrainer trainer(config, noise, pairs, fraction_begin, fraction_end,
                              derive_seed(seed, Stream::Train, {t}));
      partial[t] = trainer.train(part, emb);
    });
  }
  for (auto& th : pool) th.join();
  TrainStats total;
  for (const auto& s : partial) {
    total.pairs += s.pairs;
    total.loss_sum += s.loss_sum;
  }
  return total;
}

double softmax_prob(const EmbeddingMatrix& emb, NodeId u, NodeId v) {
  require(u < emb.rows() && v < emb.rows(), "node index out of range");
  const auto x = emb.input.row(u);
  std::vector<double> logits(emb.rows());
  for (std::size_t w = 0; w < emb.rows(); ++w) logits[w] = dot(x, emb.context.row(w));
  const double m = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  for (double l : logits) denom += std::exp(l - m);
  return std::exp(logits[v] - m) / denom;
}

}  // namespace globalwalk
