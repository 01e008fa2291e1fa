#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "globalwalk/embedding.hpp"
#include "globalwalk/graph.hpp"
#include "globalwalk/rng.hpp"

namespace globalwalk {

enum class Likelihood { Inverse, Threshold, ShiftedExp };

std::string_view to_string(Likelihood kind);
Likelihood parse_likelihood(std::string_view text);  // "inv" | "thr" | "exp"

struct LikelihoodConstants {
  double eps_inv = 0.01;
  double eps_thr = 0.5;
  double exp_shift = 2.0;   // c in c - exp(ξ)
  double exp_floor = 1e-3;  // keeps c - exp(ξ) a valid weight past ξ = ln c
};

/// Unnormalized transition weight for a neighbor at normalized distance ξ.
/// Non-increasing in ξ and strictly positive. ξ must lie in [0, 1].
double likelihood_weight(Likelihood kind, double xi, const LikelihoodConstants& constants = {});

struct AnnealSchedule {
  double beta = 0.2;
  double lambda_max = 1.0;

  /// Weight λ = min(t·β, λ_max) given to the semantic bias at epoch t.
  double mixture_weight(int epoch) const;
};

struct Node2vecParams {
  double p = 1.0;
  double q = 1.0;
};

/// Transition distributions, each a probability vector aligned with
/// g.neighbors(u). All of them throw Error("dead end ...") for empty N(u).
std::vector<double> uniform_distribution(const Graph& g, NodeId u);
std::vector<double> bias_distribution(const Graph& g, const Matrix& phi, NodeId u, Likelihood kind);
std::vector<double> annealed_distribution(const Graph& g, const Matrix& phi, NodeId u, int epoch,
                                          const AnnealSchedule& schedule, Likelihood kind);
/// Second-order step at `current` having arrived from `previous`.
std::vector<double> node2vec_distribution(const Graph& g, NodeId previous, NodeId current,
                                          const Node2vecParams& params);

/// Inverse-CDF draw from a probability vector.
std::size_t sample_index(std::span<const double> probs, Rng& rng);

using Walk = std::vector<NodeId>;

Walk uniform_walk(const Graph& g, NodeId start, std::size_t length, Rng& rng);
Walk node2vec_walk(const Graph& g, NodeId start, std::size_t length, const Node2vecParams& params,
                   Rng& rng);
/// First-order walk drawing each step from annealed_distribution against the
/// frozen snapshot `phi`. When the mixture weight is zero it is exactly
/// uniform_walk, draw for draw.
Walk global_walk(const Graph& g, const Matrix& phi, NodeId start, std::size_t length, int epoch,
                 const AnnealSchedule& schedule, Likelihood kind, Rng& rng);

struct UniformPolicy {};
struct Node2vecPolicy {
  Node2vecParams params;
};
struct GlobalWalkPolicy {
  Likelihood kind = Likelihood::ShiftedExp;
  AnnealSchedule schedule;
  int epoch = 0;
};
using WalkPolicy = std::variant<UniformPolicy, Node2vecPolicy, GlobalWalkPolicy>;

struct CorpusOptions {
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 80;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct Corpus {
  std::vector<Walk> walks;
  std::size_t walks_per_node = 0;
  std::size_t walk_length = 0;

  bool operator==(const Corpus& other) const = default;
};

/// r rounds, each visiting every node once in a seeded shuffled order.
/// Walk i of round k draws from its own stream derived from (seed, k, start),
/// so the result does not depend on the thread count. `snapshot` is required
/// for GlobalWalkPolicy.
Corpus generate_corpus(const Graph& g, const WalkPolicy& policy, const CorpusOptions& options,
                       const Matrix* snapshot = nullptr);

/// One walk per line as space-separated external node names.
std::string format_corpus(const Corpus& corpus, const NodeNames& names);

}  // namespace globalwalk
