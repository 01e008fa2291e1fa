#include "globalwalk/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include "globalwalk/errors.hpp"

namespace globalwalk {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::DeepWalk: return "deepwalk";
    case Method::Node2vec: return "node2vec";
    case Method::GlobalWalk: return "globalwalk";
  }
  return "?";
}

std::string_view to_string(Task t) {
  return t == Task::CommunityDetection ? "cd" : "lp";
}

Method parse_method(std::string_view text) {
  if (text == "deepwalk") return Method::DeepWalk;
  if (text == "node2vec") return Method::Node2vec;
  if (text == "globalwalk") return Method::GlobalWalk;
  throw FormatError("unknown method '" + std::string(text) +
                    "' (expected deepwalk, node2vec or globalwalk)");
}

Task parse_task(std::string_view text) {
  if (text == "cd") return Task::CommunityDetection;
  if (text == "lp") return Task::LinkPrediction;
  throw FormatError("unknown task '" + std::string(text) + "' (expected cd or lp)");
}

// ---- RunConfig -------------------------------------------------------------

void RunConfig::set(std::string_view key, std::string_view value) {
  auto positive_int = [&](auto& field) {
    const auto x = parse_unsigned(key, value);
    field = static_cast<std::remove_reference_t<decltype(field)>>(x);
  };
  if (key == "edges") edges = value;
  else if (key == "labels") labels = value;
  else if (key == "dataset") dataset = value;
  else if (key == "directed") directed = parse_flag(key, value);
  else if (key == "method") method = parse_method(value);
  else if (key == "task") task = parse_task(value);
  else if (key == "likelihood") {
    try {
      likelihood = parse_likelihood(value);
    } catch (const Error& e) {
      throw FormatError(e.what());
    }
  }
  else if (key == "beta") beta = parse_real(key, value);
  else if (key == "lambda_max") lambda_max = parse_real(key, value);
  else if (key == "p") p = parse_real(key, value);
  else if (key == "q") q = parse_real(key, value);
  else if (key == "walks") positive_int(walks);
  else if (key == "length") positive_int(length);
  else if (key == "dim") positive_int(dim);
  else if (key == "epochs") positive_int(epochs);
  else if (key == "window") positive_int(train.window);
  else if (key == "negatives") positive_int(train.negatives);
  else if (key == "lr_start") train.lr_start = parse_real(key, value);
  else if (key == "lr_end") train.lr_end = parse_real(key, value);
  else if (key == "noise_power") train.noise_power = parse_real(key, value);
  else if (key == "test_fraction") test_fraction = parse_real(key, value);
  else if (key == "seed") seed = parse_unsigned(key, value);
  else if (key == "deterministic") deterministic = parse_flag(key, value);
  else if (key == "threads") positive_int(threads);
  else throw FormatError("unknown config key '" + std::string(key) + "'");
}

void RunConfig::apply(const KeyValues& pairs) {
  for (const auto& [k, v] : pairs) set(k, v);
}

std::string RunConfig::to_text() const {
  std::string out;
  auto put = [&](std::string_view k, const std::string& v) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  };
  put("edges", edges);
  if (!labels.empty()) put("labels", labels);
  if (!dataset.empty()) put("dataset", dataset);
  put("directed", directed ? "true" : "false");
  put("method", std::string(to_string(method)));
  put("task", std::string(to_string(task)));
  if (likelihood) put("likelihood", std::string(to_string(*likelihood)));
  if (beta) put("beta", format_real(*beta));
  if (lambda_max) put("lambda_max", format_real(*lambda_max));
  if (p) put("p", format_real(*p));
  if (q) put("q", format_real(*q));
  put("walks", std::to_string(walks));
  put("length", std::to_string(length));
  put("dim", std::to_string(dim));
  put("epochs", std::to_string(epochs));
  put("window", std::to_string(train.window));
  put("negatives", std::to_string(train.negatives));
  put("lr_start", format_real(train.lr_start));
  put("lr_end", format_real(train.lr_end));
  put("noise_power", format_real(train.noise_power));
  put("test_fraction", format_real(test_fraction));
  put("seed", std::to_string(seed));
  put("deterministic", deterministic ? "true" : "false");
  put("threads", std::to_string(threads));
  return out;
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  cfg.apply(parse_key_values(text));
  return cfg;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error("invalid config: " + what); };
  if (epochs < 1) fail("epochs must be >= 1");
  if (walks < 1 || length < 1 || dim < 1) fail("walks, length and dim must be >= 1");
  if (train.window < 1 || train.negatives < 1) fail("window and negatives must be >= 1");
  if (!(train.lr_end > 0.0 && train.lr_start > train.lr_end)) fail("need lr_start > lr_end > 0");
  if (!(train.noise_power >= 0.0)) fail("noise_power must be >= 0");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) fail("test_fraction must lie in (0, 1)");
  if (method != Method::GlobalWalk && (likelihood || beta || lambda_max))
    fail("likelihood, beta and lambda_max apply to globalwalk only");
  if (method != Method::Node2vec && (p || q)) fail("p and q apply to node2vec only");
  if (beta && !(*beta >= 0.0)) fail("beta must be >= 0");
  if (lambda_max && !(*lambda_max > 0.0 && *lambda_max <= 1.0)) fail("lambda_max must lie in (0, 1]");
  if ((p && !(*p > 0.0)) || (q && !(*q > 0.0))) fail("p and q must be > 0");
}

Likelihood RunConfig::resolved_likelihood() const {
  return likelihood.value_or(Likelihood::ShiftedExp);
}

AnnealSchedule RunConfig::resolved_schedule() const {
  return AnnealSchedule{beta.value_or(0.2), lambda_max.value_or(1.0)};
}

Node2vecParams RunConfig::resolved_node2vec() const {
  const bool cd = task == Task::CommunityDetection;
  return Node2vecParams{p.value_or(cd ? 2.0 : 0.5), q.value_or(cd ? 0.5 : 2.0)};
}

unsigned RunConfig::worker_threads() const {
  if (deterministic) return 1;
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string RunConfig::dataset_id() const {
  if (!dataset.empty()) return dataset;
  if (!edges.empty()) return std::filesystem::path(edges).stem().string();
  return "graph";
}

// ---- pipeline -------------------------------------------------------------

namespace {

WalkPolicy policy_for(const RunConfig& cfg, int epoch) {
  switch (cfg.method) {
    case Method::DeepWalk: return UniformPolicy{};
    case Method::Node2vec: return Node2vecPolicy{cfg.resolved_node2vec()};
    case Method::GlobalWalk:
      return GlobalWalkPolicy{cfg.resolved_likelihood(), cfg.resolved_schedule(), epoch};
  }
  return UniformPolicy{};
}

EvalReport base_report(const RunConfig& cfg) {
  EvalReport r;
  r.dataset = cfg.dataset_id();
  r.task = std::string(to_string(cfg.task));
  r.method = std::string(to_string(cfg.method));
  if (cfg.method == Method::GlobalWalk) {
    r.likelihood = std::string(to_string(cfg.resolved_likelihood()));
    r.beta = format_real(cfg.resolved_schedule().beta);
  }
  r.seed = cfg.seed;
  r.metric = cfg.task == Task::CommunityDetection ? "ACC" : "AUC";
  auto& hp = r.hyperparameters;
  if (cfg.method == Method::Node2vec) {
    const auto nv = cfg.resolved_node2vec();
    hp.emplace_back("p", format_real(nv.p));
    hp.emplace_back("q", format_real(nv.q));
  }
  if (cfg.method == Method::GlobalWalk)
    hp.emplace_back("lambda_max", format_real(cfg.resolved_schedule().lambda_max));
  hp.emplace_back("walks", std::to_string(cfg.walks));
  hp.emplace_back("length", std::to_string(cfg.length));
  hp.emplace_back("window", std::to_string(cfg.train.window));
  hp.emplace_back("dim", std::to_string(cfg.dim));
  hp.emplace_back("epochs", std::to_string(cfg.epochs));
  hp.emplace_back("negatives", std::to_string(cfg.train.negatives));
  if (cfg.task == Task::LinkPrediction) hp.emplace_back("test_fraction", format_real(cfg.test_fraction));
  hp.emplace_back("deterministic", cfg.deterministic ? "true" : "false");
  return r;
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg, const Graph& graph, const LabelMap* labels,
                            const PipelineHooks& hooks) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const unsigned threads = cfg.worker_threads();
  if (cfg.task == Task::CommunityDetection && labels == nullptr)
    throw Error("community detection needs labels");
  if (labels && labels->labels.size() != graph.node_count())
    throw Error("label map does not match the graph");

  PipelineResult result;
  const Graph* walk_graph = &graph;
  if (cfg.task == Task::LinkPrediction) {
    result.split = split_edges(graph, cfg.test_fraction, cfg.seed);
    walk_graph = &result.split->train_graph;
  }

  result.embeddings = init_embeddings(graph.node_count(), cfg.dim, cfg.seed);
  for (int t = 0; t < cfg.epochs; ++t) {
    const Matrix snapshot = result.embeddings.input;
    if (hooks.on_snapshot) hooks.on_snapshot(t, snapshot);
    const CorpusOptions opts{cfg.walks, cfg.length, derive_seed(cfg.seed, Stream::Walk, {static_cast<std::uint64_t>(t)}),
                             threads};
    const Corpus corpus = generate_corpus(*walk_graph, policy_for(cfg, t), opts, &snapshot);
    if (hooks.on_corpus) hooks.on_corpus(t, corpus);
    const double begin = static_cast<double>(t) / cfg.epochs;
    const double end = static_cast<double>(t + 1) / cfg.epochs;
    const TrainStats stats =
        train_epoch(corpus, result.embeddings, cfg.train, begin, end,
                    derive_seed(cfg.seed, Stream::Train, {static_cast<std::uint64_t>(t)}), threads);
    if (!result.embeddings.input.all_finite())
      throw NumericalError("embeddings became non-finite in epoch " + std::to_string(t));
    if (hooks.progress) {
      *hooks.progress << "epoch=" << (t + 1) << '/' << cfg.epochs << " pairs=" << stats.pairs
                      << " mean_loss=" << stats.mean_loss() << '\n';
    }
    if (hooks.on_epoch_end) hooks.on_epoch_end(t, result.embeddings.input, stats);
  }

  result.report = base_report(cfg);
  const Matrix& phi = result.embeddings.input;
  if (cfg.task == Task::CommunityDetection) {
    KMeansOptions km;
    km.threads = threads;
    result.clusters = kmeans(phi, labels->k(), derive_seed(cfg.seed, Stream::KMeans), km);
    result.report.value = accuracy(*result.clusters, *labels);
  } else {
    std::vector<double> pos, neg;
    for (const auto& [u, v] : result.split->pos_test) pos.push_back(link_score(phi, u, v));
    for (const auto& [u, v] : result.split->neg_test) neg.push_back(link_score(phi, u, v));
    result.report.value = auc(pos, neg);
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  // Wall-clock time would break byte-identical reports in deterministic mode.
  result.report.seconds = cfg.deterministic ? 0.0 : elapsed;
  if (hooks.progress) {
    *hooks.progress << result.report.metric << '=' << result.report.value << " seconds=" << elapsed
                    << '\n';
  }
  return result;
}

PipelineInputs load_inputs(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.edges.empty()) throw Error("no edge file given");
  if (cfg.task == Task::CommunityDetection && cfg.labels.empty())
    throw Error("community detection needs a labels file");
  PipelineInputs in{load_edge_list(cfg.edges, cfg.directed), std::nullopt};
  if (cfg.task == Task::CommunityDetection) in.labels = load_labels(cfg.labels, in.graph.names());
  return in;
}

PipelineResult run_pipeline(const RunConfig& cfg, const PipelineHooks& hooks) {
  const auto in = load_inputs(cfg);
  return run_pipeline(cfg, in.graph, in.labels_or_null(), hooks);
}

void write_outputs(const RunConfig& cfg, const NodeNames& names, const PipelineResult& result,
                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto write_text = [&](const std::string& file, const std::string& text) {
    const auto path = out_dir / file;
    written.push_back(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
  };
  try {
    write_text("embeddings.txt", format_embeddings(result.embeddings.input, names));
    write_text("report.csv", EvalReport::csv_header() + '\n' + result.report.to_csv_row() + '\n');
    write_text("report.txt", result.report.to_key_value() + '\n');
    write_text("config.txt", cfg.to_text());
    if (result.clusters) {
      written.push_back(out_dir / "assignments.csv");
      write_assignments(*result.clusters, names, out_dir / "assignments.csv");
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
}

// ---- ablation -------------------------------------------------------------

AblationGrid AblationGrid::parse(std::string_view text) {
  AblationGrid grid;
  KeyValues base;
  for (auto& [k, v] : parse_key_values(text)) {
    if (k == "likelihoods") {
      for (const auto& item : split_list(v)) {
        try {
          grid.likelihoods.push_back(parse_likelihood(item));
        } catch (const Error& e) {
          throw FormatError(e.what());
        }
      }
    } else if (k == "betas") {
      for (const auto& item : split_list(v)) grid.betas.push_back(parse_real(k, item));
    } else if (k == "seeds") {
      for (const auto& item : split_list(v)) grid.seeds.push_back(parse_unsigned(k, item));
    } else {
      base.emplace_back(k, v);
    }
  }
  grid.base.method = Method::GlobalWalk;
  grid.base.apply(base);
  if (grid.base.method != Method::GlobalWalk) throw FormatError("ablation grids use method=globalwalk");
  if (grid.likelihoods.empty() && grid.betas.empty())
    throw FormatError("grid needs at least one of likelihoods, betas");
  if (grid.seeds.empty()) grid.seeds.push_back(grid.base.seed);
  return grid;
}

std::vector<std::pair<Likelihood, double>> AblationGrid::cells() const {
  std::vector<std::pair<Likelihood, double>> out;
  auto add = [&](Likelihood l, double b) {
    if (std::find(out.begin(), out.end(), std::pair{l, b}) == out.end()) out.emplace_back(l, b);
  };
  const double base_beta = base.resolved_schedule().beta;
  const Likelihood base_kind = base.resolved_likelihood();
  for (auto l : likelihoods) add(l, base_beta);
  for (double b : betas) add(base_kind, b);
  return out;
}

AblationResult ablate(const AblationGrid& grid, const Graph& graph, const LabelMap* labels,
                      std::ostream* progress) {
  AblationResult result;
  for (const auto& [kind, beta] : grid.cells()) {
    for (auto seed : grid.seeds) {
      RunConfig cfg = grid.base;
      cfg.likelihood = kind;
      cfg.beta = beta;
      cfg.seed = seed;
      AblationRun run{kind, beta, seed, std::nullopt, {}};
      try {
        run.report = run_pipeline(cfg, graph, labels).report;
      } catch (const std::exception& e) {
        run.error = e.what();
      }
      if (progress) {
        *progress << "likelihood=" << to_string(kind) << " beta=" << format_real(beta)
                  << " seed=" << seed << ' ';
        if (run.report) *progress << run.report->metric << '=' << run.report->value << '\n';
        else *progress << "error=" << run.error << '\n';
      }
      result.runs.push_back(std::move(run));
    }
  }
  return result;
}

std::string AblationResult::to_csv(const RunConfig& base) const {
  const std::string dataset = base.dataset_id();
  const std::string task(to_string(base.task));
  const std::string metric = base.task == Task::CommunityDetection ? "ACC" : "AUC";
  std::string out = EvalReport::csv_header() + '\n';
  auto sanitize = [](std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
  };
  std::vector<std::pair<Likelihood, double>> order;
  for (const auto& run : runs) {
    if (run.report) {
      out += run.report->to_csv_row() + '\n';
    } else {
      out += dataset + ',' + task + ",globalwalk," + std::string(to_string(run.likelihood)) + ',' +
             format_real(run.beta) + ',' + std::to_string(run.seed) + ",error: " +
             sanitize(run.error) + ",nan,0.000\n";
    }
    if (std::find(order.begin(), order.end(), std::pair{run.likelihood, run.beta}) == order.end())
      order.emplace_back(run.likelihood, run.beta);
  }
  char buf[64];
  for (const auto& [kind, beta] : order) {
    std::vector<double> values, seconds;
    for (const auto& run : runs) {
      if (run.likelihood == kind && run.beta == beta && run.report) {
        values.push_back(run.report->value);
        seconds.push_back(run.report->seconds);
      }
    }
    if (values.empty()) continue;
    double mean = 0.0, secs = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      mean += values[i];
      secs += seconds[i];
    }
    mean /= static_cast<double>(values.size());
    secs /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double stddev = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
    const std::string prefix = dataset + ',' + task + ",globalwalk," +
                               std::string(to_string(kind)) + ',' + format_real(beta) + ',';
    std::snprintf(buf, sizeof buf, "%.6f,%.3f", mean, secs);
    out += prefix + "mean," + metric + ',' + buf + '\n';
    std::snprintf(buf, sizeof buf, "%.6f,%.3f", stddev, secs);
    out += prefix + "stddev," + metric + ',' + buf + '\n';
  }
  return out;
}

double median(std::vector<double> values) {
  require(!values.empty(), "median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace globalwalk
