// Command-line front end: pipeline, walk, eval-cd, eval-lp, ablate.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "globalwalk/config.hpp"
#include "globalwalk/embedding.hpp"
#include "globalwalk/errors.hpp"
#include "globalwalk/eval.hpp"
#include "globalwalk/graph.hpp"
#include "globalwalk/pipeline.hpp"
#include "globalwalk/walk.hpp"

namespace gw = globalwalk;

namespace {

// Keys that take a value; every RunConfig key is also a flag of the same name.
const char* const kValueKeys[] = {"edges",  "labels",    "dataset",    "method",   "task",
                                  "likelihood", "beta",  "lambda_max", "p",        "q",
                                  "walks",  "length",    "dim",        "epochs",   "window",
                                  "negatives", "lr_start", "lr_end",   "noise_power",
                                  "test_fraction", "seed", "threads"};

struct ConfigFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool directed = false;
  bool symmetrize = false;
  bool deterministic = false;
  CLI::Option* directed_opt = nullptr;
  CLI::Option* deterministic_opt = nullptr;

  void attach(CLI::App* app) {
    for (const char* key : kValueKeys) {
      options[key] = app->add_option(std::string("--") + key, values[key]);
    }
    directed_opt = app->add_flag("--directed", directed, "Respect edge direction");
    app->add_flag("--symmetrize", symmetrize, "Load directed input as undirected");
    deterministic_opt =
        app->add_flag("--deterministic", deterministic, "Single-threaded bit-reproducible run");
  }

  // Applies flags given on the command line on top of `cfg`.
  void apply(gw::RunConfig& cfg) const {
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) cfg.set(key, values.at(key));
    }
    if (directed_opt->count() > 0) cfg.directed = true;
    if (symmetrize) cfg.directed = false;
    if (deterministic_opt->count() > 0) cfg.deterministic = true;
  }
};

gw::Matrix rows_in_graph_order(const gw::NamedEmbeddings& emb, const gw::NodeNames& names) {
  const gw::NodeNames emb_names(emb.names);
  gw::Matrix out(names.size(), emb.values.cols());
  for (gw::NodeId u = 0; u < names.size(); ++u) {
    const auto row = emb_names.find(names.name(u));
    if (!row) throw gw::Error("node '" + names.name(u) + "' missing from embedding file");
    std::copy_n(emb.values.row(*row).begin(), out.cols(), out.row(u).begin());
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gw::Error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Node embeddings from uniform, node2vec and GlobalWalk random walks"};
  app.require_subcommand(1);

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Train embeddings and evaluate them");
  ConfigFlags pipeline_flags;
  pipeline_flags.attach(pipeline);
  std::string config_file, out_dir;
  bool quiet = false;
  pipeline->add_option("--config", config_file, "key=value config; flags override it");
  pipeline->add_option("--out", out_dir, "Output directory")->required();
  pipeline->add_flag("--quiet", quiet, "No progress on stderr");

  // walk
  auto* walk = app.add_subcommand("walk", "Dump one epoch's walk corpus");
  ConfigFlags walk_flags;
  walk_flags.attach(walk);
  int walk_epoch = 0;
  std::string walk_embeddings, walk_out;
  walk->add_option("--epoch", walk_epoch, "Epoch index for the GlobalWalk schedule");
  walk->add_option("--embeddings", walk_embeddings, "Snapshot for GlobalWalk when epoch > 0");
  walk->add_option("--out", walk_out, "Output file (default stdout)");

  // eval-cd
  auto* eval_cd = app.add_subcommand("eval-cd", "K-Means ACC of an embedding file");
  std::string cd_embeddings, cd_labels, cd_assignments, cd_dataset = "embeddings";
  std::uint64_t cd_seed = 0;
  eval_cd->add_option("--embeddings", cd_embeddings)->required();
  eval_cd->add_option("--labels", cd_labels)->required();
  eval_cd->add_option("--seed", cd_seed);
  eval_cd->add_option("--assignments", cd_assignments, "Write node_id,cluster_id CSV");
  eval_cd->add_option("--dataset", cd_dataset);

  // eval-lp
  auto* eval_lp = app.add_subcommand("eval-lp", "Link-prediction AUC of an embedding file");
  std::string lp_embeddings, lp_edges, lp_dataset = "embeddings";
  std::uint64_t lp_seed = 0;
  double lp_fraction = 0.2;
  bool lp_directed = false, lp_ties = false;
  eval_lp->add_option("--embeddings", lp_embeddings)->required();
  eval_lp->add_option("--edges", lp_edges, "Full edge list; split with the pipeline's seed")->required();
  eval_lp->add_flag("--directed", lp_directed);
  eval_lp->add_option("--test_fraction", lp_fraction);
  eval_lp->add_option("--seed", lp_seed);
  eval_lp->add_flag("--tie_half_credit", lp_ties, "Count ties as 1/2");
  eval_lp->add_option("--dataset", lp_dataset);

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Run a likelihood/beta ablation grid");
  std::string grid_file, ablate_out;
  bool ablate_quiet = false;
  ablate->add_option("--grid", grid_file)->required();
  ablate->add_option("--out", ablate_out, "CSV output (default stdout)");
  ablate->add_flag("--quiet", ablate_quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*pipeline) {
      gw::RunConfig cfg;
      if (!config_file.empty()) cfg.apply(gw::load_key_values(config_file));
      pipeline_flags.apply(cfg);
      gw::PipelineHooks hooks;
      if (!quiet) hooks.progress = &std::cerr;
      const auto in = gw::load_inputs(cfg);
      const auto result = gw::run_pipeline(cfg, in.graph, in.labels_or_null(), hooks);
      gw::write_outputs(cfg, in.graph.names(), result, out_dir);
      std::cout << result.report.to_key_value() << '\n';
    } else if (*walk) {
      gw::RunConfig cfg;
      walk_flags.apply(cfg);
      if (cfg.edges.empty()) throw gw::Error("--edges is required");
      cfg.validate();
      const gw::Graph graph = gw::load_edge_list(cfg.edges, cfg.directed);
      gw::WalkPolicy policy = gw::UniformPolicy{};
      if (cfg.method == gw::Method::Node2vec) policy = gw::Node2vecPolicy{cfg.resolved_node2vec()};
      if (cfg.method == gw::Method::GlobalWalk)
        policy = gw::GlobalWalkPolicy{cfg.resolved_likelihood(), cfg.resolved_schedule(), walk_epoch};
      std::optional<gw::Matrix> snapshot;
      if (!walk_embeddings.empty())
        snapshot = rows_in_graph_order(gw::load_embeddings(walk_embeddings), graph.names());
      const gw::CorpusOptions opts{cfg.walks, cfg.length, cfg.seed, cfg.worker_threads()};
      const auto corpus = gw::generate_corpus(graph, policy, opts, snapshot ? &*snapshot : nullptr);
      const auto text = gw::format_corpus(corpus, graph.names());
      if (walk_out.empty()) std::cout << text;
      else write_file(walk_out, text);
    } else if (*eval_cd) {
      const auto emb = gw::load_embeddings(cd_embeddings);
      const gw::NodeNames names(emb.names);
      const auto labels = gw::load_labels(cd_labels, names);
      const auto clusters = gw::kmeans(emb.values, labels.k(), gw::derive_seed(cd_seed, gw::Stream::KMeans));
      gw::EvalReport report;
      report.dataset = cd_dataset;
      report.task = "cd";
      report.seed = cd_seed;
      report.metric = "ACC";
      report.value = gw::accuracy(clusters, labels);
      if (!cd_assignments.empty()) gw::write_assignments(clusters, names, cd_assignments);
      std::cout << report.to_key_value() << '\n';
    } else if (*eval_lp) {
      const gw::Graph graph = gw::load_edge_list(lp_edges, lp_directed);
      const gw::Matrix phi = rows_in_graph_order(gw::load_embeddings(lp_embeddings), graph.names());
      const auto split = gw::split_edges(graph, lp_fraction, lp_seed);
      std::vector<double> pos, neg;
      for (const auto& [u, v] : split.pos_test) pos.push_back(gw::link_score(phi, u, v));
      for (const auto& [u, v] : split.neg_test) neg.push_back(gw::link_score(phi, u, v));
      gw::EvalReport report;
      report.dataset = lp_dataset;
      report.task = "lp";
      report.seed = lp_seed;
      report.metric = "AUC";
      report.value = gw::auc(pos, neg, lp_ties);
      report.hyperparameters.emplace_back("test_fraction", gw::format_real(lp_fraction));
      report.hyperparameters.emplace_back("test_pairs", std::to_string(pos.size()));
      std::cout << report.to_key_value() << '\n';
    } else if (*ablate) {
      std::ifstream in(grid_file, std::ios::binary);
      if (!in) throw gw::Error("cannot open " + grid_file);
      const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      auto grid = gw::AblationGrid::parse(text);
      // Relative data paths are taken relative to the grid file.
      const auto base_dir = std::filesystem::path(grid_file).parent_path();
      for (auto* path : {&grid.base.edges, &grid.base.labels}) {
        if (!path->empty() && std::filesystem::path(*path).is_relative())
          *path = (base_dir / *path).string();
      }
      const auto inputs = gw::load_inputs(grid.base);
      const auto result = gw::ablate(grid, inputs.graph, inputs.labels_or_null(),
                                     ablate_quiet ? nullptr : &std::cerr);
      const auto csv = result.to_csv(grid.base);
      if (ablate_out.empty()) std::cout << csv;
      else write_file(ablate_out, csv);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
