#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "heat/graph.hpp"
#include "heat/optimizer.hpp"

namespace heat {

struct EvalReport {
  std::string task;
  std::map<std::string, double> metrics;  // name -> value in [0,1]
  std::uint64_t seed = 0;
  int dim = 0;
  double alpha = 0.0;
  std::map<std::string, std::string> params;
  bool subsampled_negatives = false;
  std::vector<std::string> warnings;
};

// Mann-Whitney AUROC where a smaller score predicts positive; ties count
// one half. Equals brute-force pair counting exactly.
double auroc(const std::vector<double>& positive_scores,
             const std::vector<double>& negative_scores);

// Link-prediction holdout: 15% of the edges by default, plus an equal
// number of uniformly sampled non-edges.
struct EdgeSplit {
  std::vector<std::pair<int, int>> train_edges;
  std::vector<std::pair<int, int>> held_out_edges;
  std::vector<std::pair<int, int>> sampled_non_edges;
  std::uint64_t seed = 0;
};

EdgeSplit split_edges(const AttributedGraph& graph, double fraction,
                      std::uint64_t seed);

// AUROC of edges vs all other pairs under embedding distance. Above
// max_full_nodes the non-edges are subsampled to 10*|E| seeded draws and
// the report is flagged.
EvalReport reconstruction_eval(const HyperboloidEmbedding& emb,
                               const AttributedGraph& graph,
                               std::uint64_t seed = 0,
                               int max_full_nodes = 10000);

// AUROC of held-out edges vs sampled non-edges; the embedding must have
// been trained on the split's training edges only.
EvalReport link_prediction_eval(const HyperboloidEmbedding& emb,
                                const EdgeSplit& split);

struct LogRegConfig {
  double l2 = 1e-4;
  int iterations = 500;
  double step = 0.1;
};

// Regularized log-loss and its gradient for one binary target column;
// weights are (F+1) with the intercept first, which is not regularized.
double logistic_regression_loss(const Eigen::MatrixXd& features,
                                const Eigen::VectorXd& target,
                                const Eigen::VectorXd& weights,
                                const LogRegConfig& config = {});
Eigen::VectorXd logistic_regression_gradient(const Eigen::MatrixXd& features,
                                             const Eigen::VectorXd& target,
                                             const Eigen::VectorXd& weights,
                                             const LogRegConfig& config = {});

// One-vs-rest L2-regularized logistic regression, full-batch gradient
// descent. Weight matrix is (F+1) x C with the intercept in row 0. Columns
// whose targets are all-positive or all-negative stay zero.
Eigen::MatrixXd logistic_regression_fit(const Eigen::MatrixXd& features,
                                        const Eigen::MatrixXd& targets,
                                        const LogRegConfig& config = {});

// Per-class scores X*w + b for a fitted weight matrix.
Eigen::MatrixXd logistic_regression_scores(const Eigen::MatrixXd& features,
                                           const Eigen::MatrixXd& weights);

// Node classification on Klein coordinates: a stratified labelled_fraction
// of labelled nodes trains the classifier, the rest are scored. Multilabel
// predicts sigmoid > 0.5 per class, single-label predicts the argmax class.
EvalReport classify_eval(const HyperboloidEmbedding& emb,
                         const AttributedGraph& graph,
                         double labelled_fraction, std::uint64_t seed);

// One CSV row per metric: task,dim,alpha,seed,metric,value,params
std::string report_csv_rows(const EvalReport& report);
inline constexpr const char* kReportCsvHeader =
    "task,dim,alpha,seed,metric,value,params";

}  // namespace heat
