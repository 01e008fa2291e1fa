#include <doctest.h>

#include <cmath>
#include <random>

#include "globalwalk/errors.hpp"
#include "globalwalk/eval.hpp"
#include "globalwalk/skipgram.hpp"
#include "oracles.hpp"

using namespace globalwalk;

namespace {

std::vector<double> row_copy(const Matrix& m, std::size_t r) {
  auto s = m.row(r);
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("context pairs") {
  const Walk w{7, 8, 9};
  CHECK(context_pairs(w, 1) == std::vector<ContextPair>{{7, 8}, {8, 7}, {8, 9}, {9, 8}});
  CHECK(context_pairs(Walk{4}, 3).empty());
  CHECK(count_context_pairs(1, 5) == 0);

  // Brute-force enumeration of |i-j| <= 10, i != j over 80 positions: 1490.
  Walk long_walk(80);
  for (NodeId i = 0; i < 80; ++i) long_walk[i] = i;
  CHECK(context_pairs(long_walk, 10).size() == 1490);
  CHECK(count_context_pairs(80, 10) == 1490);
  for (std::size_t len = 1; len < 30; ++len) {
    for (int win = 1; win < 12; ++win) {
      std::size_t brute = 0;
      for (std::size_t i = 0; i < len; ++i)
        for (std::size_t j = 0; j < len; ++j)
          brute += i != j && (i > j ? i - j : j - i) <= static_cast<std::size_t>(win);
      CHECK(count_context_pairs(len, win) == brute);
    }
  }
}

TEST_CASE("sgns loss at zero vectors") {
  EmbeddingMatrix emb{Matrix(3, 4, 0.0), Matrix(3, 4, 0.0)};
  const std::vector<NodeId> neg{2};
  CHECK(sgns_step(emb, 0, 1, neg, 0.1) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
  CHECK(std::abs(2.0 * std::log(2.0) - 1.3863) < 1e-4);
}

TEST_CASE("sgns loss matches the term-by-term reference") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 0.7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> c(6), o(6);
    std::vector<std::vector<double>> negs(3, std::vector<double>(6));
    for (double& x : c) x = g(rng);
    for (double& x : o) x = g(rng);
    for (auto& n : negs)
      for (double& x : n) x = g(rng);
    std::vector<std::span<const double>> spans(negs.begin(), negs.end());
    CHECK(sgns_loss(c, o, spans) ==
          doctest::Approx(oracle::sgns_loss_reference(c, o, negs)).epsilon(1e-13));
  }
}

TEST_CASE("sgns step follows the finite-difference gradient") {
  // The step with lr = 1 moves each row by minus its gradient at the
  // pre-step point; compare against central differences of the loss.
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 0.5);
  const std::size_t dim = 5;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    EmbeddingMatrix emb{Matrix(6, dim), Matrix(6, dim)};
    for (double& x : emb.input.data()) x = gauss(rng);
    for (double& x : emb.context.data()) x = gauss(rng);
    const NodeId center = 0, context = 1;
    const std::vector<NodeId> negatives{2, 3, 4};

    std::vector<double> x = row_copy(emb.input, center);
    std::vector<std::vector<double>> outs;
    for (NodeId r : {1u, 2u, 3u, 4u}) outs.push_back(row_copy(emb.context, r));
    auto loss = [&] {
      return oracle::sgns_loss_reference(x, outs[0], {outs[1], outs[2], outs[3]});
    };

    EmbeddingMatrix stepped = emb;
    sgns_step(stepped, center, context, negatives, 1.0);

    auto compare = [&](std::vector<double>& vec, std::span<const double> before,
                       std::span<const double> after) {
      for (std::size_t i = 0; i < dim; ++i) {
        const double analytic = before[i] - after[i];
        const double numeric = oracle::central_difference(loss, vec, i, 1e-5);
        const double rel = std::abs(analytic - numeric) / std::max(1e-3, std::abs(numeric));
        worst = std::max(worst, rel);
      }
    };
    compare(x, emb.input.row(center), stepped.input.row(center));
    for (std::size_t k = 0; k < 4; ++k)
      compare(outs[k], emb.context.row(k + 1), stepped.context.row(k + 1));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("repeated steps decrease the loss") {
  auto emb = init_embeddings(5, 8, 9);
  for (double& x : emb.context.data()) x = 0.05;
  const std::vector<NodeId> negs{3, 4};
  double prev = sgns_step(emb, 0, 1, negs, 0.05);
  for (int i = 0; i < 50; ++i) {
    const double cur = sgns_step(emb, 0, 1, negs, 0.05);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("non-finite loss aborts") {
  EmbeddingMatrix emb{Matrix(2, 1, 0.0), Matrix(2, 1, 0.0)};
  emb.input(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sgns_step(emb, 0, 1, std::vector<NodeId>{1}, 0.1), NumericalError);
}

TEST_CASE("softmax oracle") {
  EmbeddingMatrix same{Matrix(4, 3, 0.2), Matrix(4, 3, -0.1)};
  for (NodeId v = 0; v < 4; ++v) CHECK(softmax_prob(same, 1, v) == doctest::Approx(0.25).epsilon(1e-15));

  // Hand-set 3-node case against direct exponentials.
  EmbeddingMatrix hand{Matrix(3, 2), Matrix(3, 2)};
  hand.input(0, 0) = 1.0;
  hand.input(0, 1) = -0.5;
  const double out[3][2] = {{0.3, 0.1}, {-0.7, 2.0}, {1.5, 0.0}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c) hand.context(r, c) = out[r][c];
  const double l0 = 0.3 - 0.05, l1 = -0.7 - 1.0, l2 = 1.5;
  const double z = std::exp(l0) + std::exp(l1) + std::exp(l2);
  CHECK(std::abs(softmax_prob(hand, 0, 0) - std::exp(l0) / z) < 1e-12);
  CHECK(std::abs(softmax_prob(hand, 0, 1) - std::exp(l1) / z) < 1e-12);
  CHECK(std::abs(softmax_prob(hand, 0, 2) - std::exp(l2) / z) < 1e-12);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    EmbeddingMatrix emb{Matrix(7, 4), Matrix(7, 4)};
    for (double& x : emb.input.data()) x = g(rng);
    for (double& x : emb.context.data()) x = g(rng);
    double total = 0.0;
    for (NodeId v = 0; v < 7; ++v) total += softmax_prob(emb, 2, v);
    CHECK(std::abs(total - 1.0) <= 1e-12);
    // Shifting every context row by 5·x_u/|x_u|² adds 5 to every logit.
    EmbeddingMatrix shifted = emb;
    auto x = emb.input.row(2);
    double norm2 = 0.0;
    for (double v : x) norm2 += v * v;
    for (std::size_t r = 0; r < 7; ++r)
      for (std::size_t c = 0; c < 4; ++c) shifted.context(r, c) += 5.0 * x[c] / norm2;
    for (NodeId v = 0; v < 7; ++v)
      CHECK(softmax_prob(shifted, 2, v) == doctest::Approx(softmax_prob(emb, 2, v)).epsilon(1e-10));
  }
}

TEST_CASE("noise table frequencies") {
  Corpus corpus;
  corpus.walks = {{0, 0, 0, 0, 1, 1, 2}, {0, 3, 3, 3, 3, 3, 3, 3, 3}};
  const NoiseTable noise(corpus, 5, 0.75);
  // counts: 0->5, 1->2, 2->1, 3->8, 4->0
  const double w[5] = {std::pow(5.0, 0.75), std::pow(2.0, 0.75), 1.0, std::pow(8.0, 0.75), 0.0};
  const double total = w[0] + w[1] + w[2] + w[3];
  for (NodeId i = 0; i < 5; ++i) CHECK(noise.probability(i) == doctest::Approx(w[i] / total));

  Rng rng(8);
  std::vector<int> counts(5, 0);
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) ++counts[noise.sample(rng)];
  CHECK(counts[4] == 0);
  for (NodeId i = 0; i < 4; ++i) {
    const double expected = w[i] / total;
    CHECK(std::abs(counts[i] / double(draws) - expected) <= 0.01 * expected);
  }
}

TEST_CASE("alias table handles zero and skewed weights") {
  const std::vector<double> weights{0.0, 1e-6, 0.0, 5.0, 0.0};
  AliasTable table(weights);
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const auto s = table.sample(rng);
    CHECK((s == 1 || s == 3));
  }
  CHECK_THROWS_AS(AliasTable(std::vector<double>{0.0, 0.0}), ContractViolation);
}

TEST_CASE("empty-context corpus leaves embeddings unchanged") {
  Corpus corpus;
  corpus.walks = {{0}, {1}, {2}};
  auto emb = init_embeddings(3, 4, 1);
  const auto before = emb.input;
  const auto stats = train_epoch(corpus, emb, TrainConfig{}, 0.0, 1.0, 5);
  CHECK(stats.pairs == 0);
  CHECK(stats.mean_loss() == 0.0);
  CHECK(emb.input == before);
}

TEST_CASE("training is deterministic") {
  const Graph g = oracle::cliques(2, 4);
  const auto corpus = generate_corpus(g, UniformPolicy{}, {5, 20, 1, 1});
  auto a = init_embeddings(8, 6, 2);
  auto b = a;
  train_epoch(corpus, a, TrainConfig{}, 0.0, 0.5, 42);
  train_epoch(corpus, b, TrainConfig{}, 0.0, 0.5, 42);
  CHECK(a.input == b.input);
  CHECK(a.context == b.context);
}

TEST_CASE("warm start equals one pass over the concatenated corpus") {
  const Graph g = oracle::random_graph(12, 0.3, false, 1);
  const auto first = generate_corpus(g, UniformPolicy{}, {2, 15, 1, 1});
  const auto second = generate_corpus(g, UniformPolicy{}, {3, 15, 2, 1});
  Corpus joined = first;
  joined.walks.insert(joined.walks.end(), second.walks.begin(), second.walks.end());
  const std::vector<double> uniform_noise(12, 1.0);
  const TrainConfig cfg;
  const std::size_t total = count_context_pairs(joined, cfg.window);

  auto split = init_embeddings(12, 5, 3);
  auto whole = split;
  SkipGramTrainer two_calls(cfg, NoiseTable(uniform_noise), total, 0.0, 1.0, 9);
  two_calls.train(first, split);
  two_calls.train(second, split);
  SkipGramTrainer one_call(cfg, NoiseTable(uniform_noise), total, 0.0, 1.0, 9);
  one_call.train(joined, whole);
  CHECK(split.input == whole.input);
  CHECK(split.context == whole.context);
  CHECK(two_calls.current_lr() == doctest::Approx(cfg.lr_end));
}

TEST_CASE("learning rate decays linearly over the fraction span") {
  const std::vector<double> noise(3, 1.0);
  TrainConfig cfg;
  SkipGramTrainer t(cfg, NoiseTable(noise), 100, 0.5, 1.0, 1);
  CHECK(t.current_lr() == doctest::Approx(cfg.lr_start - (cfg.lr_start - cfg.lr_end) * 0.5));
}

TEST_CASE("two cliques separate after training") {
  const Graph g = oracle::cliques(2, 4);
  auto emb = init_embeddings(8, 8, 5);
  TrainConfig cfg;
  cfg.window = 3;
  const int epochs = 200;
  for (int t = 0; t < epochs; ++t) {
    const auto corpus = generate_corpus(g, UniformPolicy{}, {1, 10, static_cast<std::uint64_t>(t), 1});
    train_epoch(corpus, emb, cfg, double(t) / epochs, double(t + 1) / epochs, 1000 + t);
  }
  double intra = 0.0, inter = 0.0;
  int n_intra = 0, n_inter = 0;
  for (NodeId u = 0; u < 8; ++u) {
    for (NodeId v = u + 1; v < 8; ++v) {
      const double d = euclidean_distance(emb.input.row(u), emb.input.row(v));
      if (u / 4 == v / 4) {
        intra += d;
        ++n_intra;
      } else {
        inter += d;
        ++n_inter;
      }
    }
  }
  CHECK(intra / n_intra < inter / n_inter);
  CHECK(emb.input.all_finite());
}

TEST_CASE("parallel training keeps embeddings finite") {
  const Graph g = oracle::cliques(3, 5);
  const auto corpus = generate_corpus(g, UniformPolicy{}, {4, 20, 1, 1});
  auto emb = init_embeddings(15, 8, 1);
  const auto stats = train_epoch(corpus, emb, TrainConfig{}, 0.0, 1.0, 3, 3);
  CHECK(stats.pairs == count_context_pairs(corpus, 10));
  CHECK(emb.input.all_finite());
}

TEST_CASE("train config validation") {
  TrainConfig bad;
  bad.lr_end = bad.lr_start;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  TrainConfig w;
  w.window = 0;
  CHECK_THROWS_AS(w.validate(), ContractViolation);
}
