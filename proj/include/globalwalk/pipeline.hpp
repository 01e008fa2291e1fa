#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "globalwalk/config.hpp"
#include "globalwalk/embedding.hpp"
#include "globalwalk/eval.hpp"
#include "globalwalk/graph.hpp"
#include "globalwalk/skipgram.hpp"
#include "globalwalk/walk.hpp"

namespace globalwalk {

enum class Method { DeepWalk, Node2vec, GlobalWalk };
enum class Task { CommunityDetection, LinkPrediction };

std::string_view to_string(Method m);
std::string_view to_string(Task t);
Method parse_method(std::string_view text);
Task parse_task(std::string_view text);

/// Everything needed to reproduce one run. Serializes to flat key=value
/// text; method-specific keys are present only for their method.
struct RunConfig {
  std::string edges;
  std::string labels;
  std::string dataset;  ///< report id; defaults to the edge file stem
  bool directed = false;
  Method method = Method::DeepWalk;
  Task task = Task::CommunityDetection;

  std::optional<Likelihood> likelihood;  // globalwalk only, default exp
  std::optional<double> beta;            // globalwalk only, default 0.2
  std::optional<double> lambda_max;      // globalwalk only, default 1
  std::optional<double> p;               // node2vec only, default per task
  std::optional<double> q;

  std::size_t walks = 10;
  std::size_t length = 80;
  std::size_t dim = 64;
  int epochs = 3;
  TrainConfig train;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  bool deterministic = false;
  unsigned threads = 0;  ///< 0 = hardware concurrency; ignored when deterministic

  /// Applies one key=value pair; unknown keys and bad values throw FormatError.
  void set(std::string_view key, std::string_view value);
  void apply(const KeyValues& pairs);
  std::string to_text() const;
  static RunConfig parse(std::string_view text);
  /// Throws Error describing the first violated constraint.
  void validate() const;

  Likelihood resolved_likelihood() const;
  AnnealSchedule resolved_schedule() const;
  Node2vecParams resolved_node2vec() const;
  unsigned worker_threads() const;
  std::string dataset_id() const;

  bool operator==(const RunConfig& other) const = default;
};

struct PipelineHooks {
  /// Called with the frozen matrix the epoch's walks will read.
  std::function<void(int epoch, const Matrix& snapshot)> on_snapshot;
  std::function<void(int epoch, const Corpus& corpus)> on_corpus;
  /// Called after training with the updated input matrix.
  std::function<void(int epoch, const Matrix& phi, const TrainStats& stats)> on_epoch_end;
  std::ostream* progress = nullptr;
};

struct PipelineResult {
  EmbeddingMatrix embeddings;
  EvalReport report;
  std::optional<ClusterAssignment> clusters;  // cd only
  std::optional<LinkSplit> split;             // lp only
};

/// Epoch loop (snapshot → walks → train) followed by evaluation. For lp the
/// graph is split first and only the training graph is walked. `labels` is
/// required for cd.
PipelineResult run_pipeline(const RunConfig& config, const Graph& graph, const LabelMap* labels,
                            const PipelineHooks& hooks = {});
struct PipelineInputs {
  Graph graph;
  std::optional<LabelMap> labels;  // cd only

  const LabelMap* labels_or_null() const { return labels ? &*labels : nullptr; }
};

/// Validates the config and loads config.edges, plus config.labels for cd.
PipelineInputs load_inputs(const RunConfig& config);
/// load_inputs followed by the run.
PipelineResult run_pipeline(const RunConfig& config, const PipelineHooks& hooks = {});

/// Writes embeddings.txt, report.csv, report.txt, config.txt and, for cd,
/// assignments.csv into `out_dir`. Files already written are removed if a
/// later step fails.
void write_outputs(const RunConfig& config, const NodeNames& names, const PipelineResult& result,
                   const std::filesystem::path& out_dir);

/// Table-style ablation: {likelihoods × base β} ∪ {base likelihood × betas},
/// every cell run once per seed.
struct AblationGrid {
  RunConfig base;
  std::vector<Likelihood> likelihoods;
  std::vector<double> betas;
  std::vector<std::uint64_t> seeds;

  /// Base RunConfig keys plus comma lists `likelihoods`, `betas`, `seeds`.
  static AblationGrid parse(std::string_view text);
  std::vector<std::pair<Likelihood, double>> cells() const;
};

struct AblationRun {
  Likelihood likelihood;
  double beta;
  std::uint64_t seed;
  std::optional<EvalReport> report;
  std::string error;
};

struct AblationResult {
  std::vector<AblationRun> runs;
  /// Run rows, then per cell a "mean" and a "stddev" row over successful runs.
  std::string to_csv(const RunConfig& base) const;
};

AblationResult ablate(const AblationGrid& grid, const Graph& graph, const LabelMap* labels,
                      std::ostream* progress = nullptr);

double median(std::vector<double> values);

}  // namespace globalwalk
