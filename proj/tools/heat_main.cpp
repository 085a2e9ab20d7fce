// heat: hyperboloid embedding of attributed networks.
//
// Subcommands: embed, walks, lp-split, eval-reconstruction, eval-lp,
// eval-classify, project. Every run is reproducible from its --seed; the
// manifest written next to each output echoes the full configuration.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heat/errors.hpp"
#include "heat/evaluation.hpp"
#include "heat/geometry.hpp"
#include "heat/graph.hpp"
#include "heat/io.hpp"
#include "heat/optimizer.hpp"
#include "heat/sampler.hpp"

namespace fs = std::filesystem;
namespace geo = heat::geometry;

namespace {

struct RunConfig {
  std::string edges_path;
  std::optional<std::string> attributes_path;
  std::optional<std::string> labels_path;
  std::string output_dir = ".";
  int dim = 10;
  std::uint64_t seed = 1;
  int reps = 1;
  double lp_fraction = 0.15;
  std::vector<double> fractions = {0.02, 0.04, 0.06, 0.08, 0.10};
  heat::WalkConfig walk;
  heat::TrainConfig train;
};

void add_input_flags(CLI::App* cmd, RunConfig& cfg, bool need_edges = true) {
  auto* edges = cmd->add_option("--edges", cfg.edges_path,
                                "Edge list file (`src dst [weight]`)");
  if (need_edges) edges->required();
  cmd->add_option("--attributes", cfg.attributes_path,
                  "Node attribute CSV (`id,f1,...,fd`)");
  cmd->add_option("--labels", cfg.labels_path, "Node label CSV (`id,label`)");
  cmd->add_option("--output-dir,-o", cfg.output_dir, "Output directory");
  cmd->add_option("--seed", cfg.seed, "Master seed");
}

void add_walk_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--alpha", cfg.walk.alpha,
                  "Attribute-teleport probability in [0,1]");
  cmd->add_option("--walks-per-node,-s", cfg.walk.walks_per_node,
                  "Walks per node");
  cmd->add_option("--walk-length,-l", cfg.walk.walk_length, "Walk length");
  cmd->add_option("--context,-c", cfg.walk.context_size, "Context size");
}

void add_train_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--dim,-n", cfg.dim, "Embedding dimension");
  cmd->add_option("--lr", cfg.train.learning_rate, "Learning rate");
  cmd->add_option("--epochs,-e", cfg.train.epochs, "Training epochs");
  cmd->add_option("--negatives,-m", cfg.train.negatives,
                  "Negative samples per pair");
  cmd->add_option("--batch,-b", cfg.train.batch_size, "Batch size");
  cmd->add_option("--sigma", cfg.train.sigma, "Gaussian width");
  cmd->add_flag("--no-symmetric-negatives",
                [&cfg](std::int64_t) { cfg.train.symmetric_negatives = false; },
                "Disable role-swapped gradient updates of candidates");
}

heat::AttributedGraph load_input_graph(const RunConfig& cfg,
                                       bool walk_based = true) {
  if (walk_based && cfg.walk.alpha > 0.0 && !cfg.attributes_path) {
    throw heat::ConfigError(
        "alpha > 0 requires --attributes; pass --alpha 0 for a "
        "topology-only embedding");
  }
  auto graph = heat::load_graph_files(cfg.edges_path, cfg.attributes_path,
                                      cfg.labels_path);
  if (graph.has_attributes) graph = heat::standardize_attributes(graph);
  return graph;
}

std::map<std::string, std::string> base_manifest(const RunConfig& cfg) {
  std::map<std::string, std::string> m;
  auto put = [&m](const std::string& k, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    m[k] = buf;
  };
  m["edges"] = cfg.edges_path;
  if (cfg.attributes_path) m["attributes"] = *cfg.attributes_path;
  if (cfg.labels_path) m["labels"] = *cfg.labels_path;
  put("alpha", cfg.walk.alpha);
  m["walks_per_node"] = std::to_string(cfg.walk.walks_per_node);
  m["walk_length"] = std::to_string(cfg.walk.walk_length);
  m["context"] = std::to_string(cfg.walk.context_size);
  m["dim"] = std::to_string(cfg.dim);
  put("lr", cfg.train.learning_rate);
  m["epochs"] = std::to_string(cfg.train.epochs);
  m["negatives"] = std::to_string(cfg.train.negatives);
  m["batch"] = std::to_string(cfg.train.batch_size);
  put("sigma", cfg.train.sigma);
  m["seed"] = std::to_string(cfg.seed);
  return m;
}

struct TrainedRun {
  heat::HyperboloidEmbedding emb;
  heat::TrainResult result;
  heat::WalkStats walk_stats;
};

// graph -> walks -> pairs -> SGD, the shared pipeline of all subcommands.
TrainedRun run_pipeline(const heat::AttributedGraph& graph, RunConfig cfg,
                        std::uint64_t seed) {
  TrainedRun run;
  cfg.walk.seed = heat::derive_seed(seed, "walks");
  if (!graph.has_attributes) cfg.walk.alpha = 0.0;
  auto tables = heat::build_transition_tables(graph);
  auto walks = heat::generate_walks(tables, cfg.walk, &run.walk_stats);
  auto corpus =
      heat::extract_pairs(walks, cfg.walk.context_size, graph.num_nodes());
  run.emb = heat::init_embedding(graph.num_nodes(), cfg.dim, seed);
  cfg.train.seed = seed;
  run.result = heat::train(run.emb, corpus, cfg.train);
  return run;
}

void ensure_output_dir(const RunConfig& cfg) {
  fs::create_directories(cfg.output_dir);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

void write_aggregate(const std::string& results_path,
                     const std::vector<heat::EvalReport>& reports,
                     const RunConfig& cfg) {
  if (reports.size() < 2) return;
  heat::EvalReport agg;
  agg.task = reports[0].task;
  agg.dim = reports[0].dim;
  agg.alpha = cfg.walk.alpha;
  agg.seed = cfg.seed;
  agg.params = reports[0].params;
  agg.params["reps"] = std::to_string(reports.size());
  for (const auto& [metric, _] : reports[0].metrics) {
    double mean = 0.0;
    for (const auto& r : reports) mean += r.metrics.at(metric);
    mean /= static_cast<double>(reports.size());
    double var = 0.0;
    for (const auto& r : reports) {
      double d = r.metrics.at(metric) - mean;
      var += d * d;
    }
    var /= static_cast<double>(reports.size() - 1);  // sample stddev
    agg.metrics[metric + "_mean"] = mean;
    agg.metrics[metric + "_std"] = std::sqrt(var);
  }
  heat::append_results_csv(results_path, agg);
}

int cmd_embed(const RunConfig& cfg) {
  auto graph = load_input_graph(cfg);
  ensure_output_dir(cfg);
  auto run = run_pipeline(graph, cfg, cfg.seed);

  heat::save_embedding_csv(out_path(cfg, "embedding.csv"), run.emb,
                           graph.node_ids);
  heat::save_id_map(out_path(cfg, "id_map.csv"), graph.node_ids);
  heat::save_loss_trace(out_path(cfg, "loss.csv"), run.result.epoch_losses);

  auto manifest = base_manifest(cfg);
  manifest["num_nodes"] = std::to_string(graph.num_nodes());
  manifest["num_edges"] = std::to_string(graph.num_edges());
  manifest["num_attributes"] = std::to_string(graph.num_attributes());
  heat::write_manifest(out_path(cfg, "manifest.txt"), manifest);

  std::cout << "embedded " << graph.num_nodes() << " nodes; final mean loss "
            << run.result.epoch_losses.back() << "\n";
  return 0;
}

int cmd_walks(const RunConfig& cfg) {
  auto graph = load_input_graph(cfg);
  ensure_output_dir(cfg);
  RunConfig local = cfg;
  local.walk.seed = heat::derive_seed(cfg.seed, "walks");
  if (!graph.has_attributes) local.walk.alpha = 0.0;
  auto tables = heat::build_transition_tables(graph);
  heat::WalkStats stats;
  auto walks = heat::generate_walks(tables, local.walk, &stats);
  auto corpus = heat::extract_pairs(walks, local.walk.context_size,
                                    graph.num_nodes());

  heat::save_walks(out_path(cfg, "walks.txt"), walks, graph.node_ids);

  double total = 0.0, entropy = 0.0;
  for (auto c : corpus.occurrence_counts) total += static_cast<double>(c);
  for (auto c : corpus.occurrence_counts) {
    if (c > 0) {
      double p = static_cast<double>(c) / total;
      entropy -= p * std::log(p);
    }
  }
  std::map<std::string, std::string> stats_kv;
  stats_kv["truncated_walks"] = std::to_string(stats.truncated_walks);
  stats_kv["rejection_cap_hits"] = "0";  // negatives are not drawn here
  stats_kv["pair_count"] = std::to_string(corpus.pairs.size());
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", entropy);
  stats_kv["corpus_entropy"] = buf;
  heat::write_manifest(out_path(cfg, "walk_stats.txt"), stats_kv);
  std::cout << "wrote " << walks.size() << " walks\n";
  return 0;
}

int cmd_lp_split(const RunConfig& cfg) {
  auto graph = load_input_graph(cfg, /*walk_based=*/false);
  ensure_output_dir(cfg);
  auto split = heat::split_edges(graph, cfg.lp_fraction, cfg.seed);

  auto dump = [&](const std::string& name,
                  const std::vector<std::pair<int, int>>& edges,
                  bool with_weight) {
    std::ofstream out(out_path(cfg, name));
    for (auto [u, v] : edges) {
      out << graph.node_ids[u] << ' ' << graph.node_ids[v];
      if (with_weight) out << ' ' << graph.weight(u, v);
      out << '\n';
    }
  };
  dump("train_edges.txt", split.train_edges, true);
  dump("held_out_edges.txt", split.held_out_edges, true);
  dump("non_edges.txt", split.sampled_non_edges, false);
  std::cout << "held out " << split.held_out_edges.size() << " of "
            << graph.num_edges() << " edges\n";
  return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& task) {
  auto graph = load_input_graph(cfg);
  if (task == "classify" && !graph.has_labels) {
    throw heat::ConfigError("eval-classify requires --labels");
  }
  ensure_output_dir(cfg);
  std::string results_path = out_path(cfg, "results.csv");
  std::error_code ec;
  fs::remove(results_path, ec);  // reruns must be byte-identical

  std::vector<heat::EvalReport> reports;
  for (int rep = 0; rep < cfg.reps; ++rep) {
    std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(rep);
    if (task == "reconstruction") {
      auto run = run_pipeline(graph, cfg, seed);
      auto report = heat::reconstruction_eval(run.emb, graph, seed);
      report.seed = seed;
      report.alpha = cfg.walk.alpha;
      heat::append_results_csv(results_path, report);
      reports.push_back(report);
    } else if (task == "lp") {
      auto split = heat::split_edges(graph, cfg.lp_fraction, seed);
      auto train_graph = heat::subgraph_with_edges(graph, split.train_edges);
      auto run = run_pipeline(train_graph, cfg, seed);
      auto report = heat::link_prediction_eval(run.emb, split);
      report.alpha = cfg.walk.alpha;
      heat::append_results_csv(results_path, report);
      reports.push_back(report);
    } else {  // classify
      auto run = run_pipeline(graph, cfg, seed);
      for (double fraction : cfg.fractions) {
        auto report = heat::classify_eval(run.emb, graph, fraction, seed);
        report.alpha = cfg.walk.alpha;
        for (const auto& w : report.warnings) {
          std::cerr << "warning: " << w << "\n";
        }
        heat::append_results_csv(results_path, report);
        reports.push_back(report);
      }
    }
  }
  if (task != "classify") write_aggregate(results_path, reports, cfg);
  std::cout << "wrote " << results_path << "\n";
  return 0;
}

int cmd_project(const std::string& embedding_path, const std::string& model,
                const std::string& output_path, bool check_roundtrip) {
  auto loaded = heat::load_embedding_csv(embedding_path, 1e-6);
  const int dim = loaded.emb.dim();
  std::ofstream out(output_path);
  if (!out) throw heat::DataError("cannot open for writing: " + output_path);
  out << "id";
  for (int k = 1; k <= dim; ++k) out << ",k" << k;
  out << '\n';
  double worst_residual = 0.0;
  for (int u = 0; u < loaded.emb.num_points(); ++u) {
    Eigen::VectorXd x = loaded.emb.points.row(u);
    Eigen::VectorXd p =
        model == "poincare" ? geo::to_poincare(x) : geo::to_klein(x);
    if (check_roundtrip) {
      Eigen::VectorXd lifted =
          model == "poincare" ? geo::from_poincare(p) : geo::from_klein(p);
      worst_residual =
          std::max(worst_residual, (lifted - x).cwiseAbs().maxCoeff());
    }
    out << loaded.ids[u];
    for (int k = 0; k < dim; ++k) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", p(k));
      out << ',' << buf;
    }
    out << '\n';
  }
  if (check_roundtrip) {
    std::cout << "max round-trip residual " << worst_residual << "\n";
    if (worst_residual > 1e-9) {
      throw heat::NumericError("projection round-trip residual above 1e-9");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HEAT: hyperboloid embedding of attributed networks"};
  app.require_subcommand(1);

  RunConfig cfg;

  auto* embed = app.add_subcommand("embed", "Train and save an embedding");
  add_input_flags(embed, cfg);
  add_walk_flags(embed, cfg);
  add_train_flags(embed, cfg);

  auto* walks = app.add_subcommand("walks", "Dump teleport random walks");
  add_input_flags(walks, cfg);
  add_walk_flags(walks, cfg);

  auto* lp_split =
      app.add_subcommand("lp-split", "Write a link-prediction edge split");
  add_input_flags(lp_split, cfg);
  lp_split->add_option("--fraction", cfg.lp_fraction, "Held-out fraction");

  auto* eval_recon = app.add_subcommand("eval-reconstruction",
                                        "Reconstruction AUROC over seeds");
  auto* eval_lp =
      app.add_subcommand("eval-lp", "Link-prediction AUROC over seeds");
  auto* eval_classify = app.add_subcommand(
      "eval-classify", "Klein + logistic-regression node classification");
  for (auto* cmd : {eval_recon, eval_lp, eval_classify}) {
    add_input_flags(cmd, cfg);
    add_walk_flags(cmd, cfg);
    add_train_flags(cmd, cfg);
    cmd->add_option("--reps", cfg.reps, "Number of repetition seeds");
  }
  eval_lp->add_option("--fraction", cfg.lp_fraction, "Held-out fraction");
  eval_classify->add_option("--fractions", cfg.fractions,
                            "Labelled-fraction grid");

  std::string embedding_path, model = "klein", output_path = "projected.csv";
  bool check_roundtrip = false;
  auto* project =
      app.add_subcommand("project", "Project an embedding to a ball model");
  project->add_option("--embedding", embedding_path, "Embedding CSV")
      ->required();
  project->add_option("--model", model, "poincare or klein")
      ->check(CLI::IsMember({"poincare", "klein"}));
  project->add_option("--output", output_path, "Output CSV");
  project->add_flag("--check-roundtrip", check_roundtrip,
                    "Verify the inverse projection");

  try {
    app.parse(argc, argv);
    if (embed->parsed()) return cmd_embed(cfg);
    if (walks->parsed()) return cmd_walks(cfg);
    if (lp_split->parsed()) return cmd_lp_split(cfg);
    if (eval_recon->parsed()) return cmd_eval(cfg, "reconstruction");
    if (eval_lp->parsed()) return cmd_eval(cfg, "lp");
    if (eval_classify->parsed()) return cmd_eval(cfg, "classify");
    if (project->parsed()) {
      return cmd_project(embedding_path, model, output_path, check_roundtrip);
    }
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const heat::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const heat::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const heat::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
