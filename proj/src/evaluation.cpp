#include "heat/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "heat/errors.hpp"
#include "heat/geometry.hpp"
#include "heat/rng.hpp"

namespace heat {

namespace geo = heat::geometry;

double auroc(const std::vector<double>& positive_scores,
             const std::vector<double>& negative_scores) {
  if (positive_scores.empty() || negative_scores.empty()) {
    throw DataError("auroc: both score lists must be nonempty");
  }
  std::vector<double> neg = negative_scores;
  std::sort(neg.begin(), neg.end());
  double total = 0.0;
  for (double p : positive_scores) {
    auto lo = std::lower_bound(neg.begin(), neg.end(), p);
    auto hi = std::upper_bound(lo, neg.end(), p);
    double wins = static_cast<double>(neg.end() - hi);
    double ties = static_cast<double>(hi - lo);
    total += wins + 0.5 * ties;
  }
  return total / (static_cast<double>(positive_scores.size()) *
                  static_cast<double>(neg.size()));
}

namespace {

double embedding_distance(const HyperboloidEmbedding& emb, int u, int v) {
  return geo::distance(Eigen::VectorXd(emb.points.row(u)),
                       Eigen::VectorXd(emb.points.row(v)));
}

}  // namespace

EvalReport reconstruction_eval(const HyperboloidEmbedding& emb,
                               const AttributedGraph& graph,
                               std::uint64_t seed, int max_full_nodes) {
  const int n = graph.num_nodes();
  std::vector<double> pos;
  pos.reserve(graph.num_edges());
  for (auto [u, v] : graph.edges) pos.push_back(embedding_distance(emb, u, v));

  std::vector<double> neg;
  EvalReport report;
  report.task = "reconstruction";
  report.seed = seed;
  report.dim = emb.dim();

  if (n <= max_full_nodes) {
    neg.reserve(static_cast<std::size_t>(n) * (n - 1) / 2 -
                graph.num_edges());
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (!graph.has_edge(u, v)) {
          neg.push_back(embedding_distance(emb, u, v));
        }
      }
    }
  } else {
    report.subsampled_negatives = true;
    Rng rng(derive_seed(seed, "recon-negatives"));
    std::size_t want = 10 * graph.num_edges();
    while (neg.size() < want) {
      int u = static_cast<int>(rng.index(n));
      int v = static_cast<int>(rng.index(n));
      if (u == v || graph.has_edge(u, v)) continue;
      neg.push_back(embedding_distance(emb, u, v));
    }
  }
  report.metrics["auroc"] = auroc(pos, neg);
  return report;
}

EdgeSplit split_edges(const AttributedGraph& graph, double fraction,
                      std::uint64_t seed) {
  if (fraction < 0.0 || fraction >= 1.0) {
    throw ConfigError("split_edges: fraction must be in [0,1)");
  }
  if (graph.num_edges() < 10) {
    throw DataError("split_edges: need at least 10 edges");
  }
  EdgeSplit split;
  split.seed = seed;

  std::vector<std::size_t> order(graph.num_edges());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(seed, "edge-split"));
  rng.shuffle(order);

  auto held = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(graph.num_edges())));
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < held ? split.held_out_edges : split.train_edges)
        .push_back(graph.edges[order[i]]);
  }

  const int n = graph.num_nodes();
  std::set<std::pair<int, int>> chosen;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 100 * graph.num_edges();
  while (split.sampled_non_edges.size() < held) {
    if (++attempts > max_attempts) {
      throw DataError("split_edges: could not sample enough non-edges");
    }
    int u = static_cast<int>(rng.index(n));
    int v = static_cast<int>(rng.index(n));
    if (u == v) continue;
    auto key = std::minmax(u, v);
    if (graph.has_edge(u, v) || !chosen.insert(key).second) continue;
    split.sampled_non_edges.push_back(key);
  }
  return split;
}

EvalReport link_prediction_eval(const HyperboloidEmbedding& emb,
                                const EdgeSplit& split) {
  std::vector<double> pos, neg;
  pos.reserve(split.held_out_edges.size());
  neg.reserve(split.sampled_non_edges.size());
  for (auto [u, v] : split.held_out_edges) {
    pos.push_back(embedding_distance(emb, u, v));
  }
  for (auto [u, v] : split.sampled_non_edges) {
    neg.push_back(embedding_distance(emb, u, v));
  }
  EvalReport report;
  report.task = "link-prediction";
  report.seed = split.seed;
  report.dim = emb.dim();
  report.metrics["auroc"] = auroc(pos, neg);
  return report;
}

namespace {

Eigen::MatrixXd with_bias(const Eigen::MatrixXd& features) {
  Eigen::MatrixXd x(features.rows(), features.cols() + 1);
  x.col(0).setOnes();
  x.rightCols(features.cols()) = features;
  return x;
}

}  // namespace

double logistic_regression_loss(const Eigen::MatrixXd& features,
                                const Eigen::VectorXd& target,
                                const Eigen::VectorXd& weights,
                                const LogRegConfig& config) {
  Eigen::VectorXd z = with_bias(features) * weights;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    // -log sigmoid((2y-1)z), written overflow-safe
    double margin = (2.0 * target(i) - 1.0) * z(i);
    loss += margin > 0.0 ? std::log1p(std::exp(-margin))
                         : -margin + std::log1p(std::exp(margin));
  }
  loss /= static_cast<double>(z.size());
  const auto nf = features.cols();
  loss += 0.5 * config.l2 * weights.tail(nf).squaredNorm();
  return loss;
}

Eigen::VectorXd logistic_regression_gradient(const Eigen::MatrixXd& features,
                                             const Eigen::VectorXd& target,
                                             const Eigen::VectorXd& weights,
                                             const LogRegConfig& config) {
  Eigen::MatrixXd x = with_bias(features);
  Eigen::VectorXd p = (1.0 + (-(x * weights).array()).exp()).inverse();
  Eigen::VectorXd grad =
      x.transpose() * (p - target) / static_cast<double>(x.rows());
  grad.tail(features.cols()) += config.l2 * weights.tail(features.cols());
  return grad;
}

Eigen::MatrixXd logistic_regression_fit(const Eigen::MatrixXd& features,
                                        const Eigen::MatrixXd& targets,
                                        const LogRegConfig& config) {
  if (features.rows() != targets.rows()) {
    throw DataError("logistic_regression_fit: row mismatch");
  }
  if (!features.allFinite()) {
    throw NumericError("logistic_regression_fit: non-finite features");
  }
  const auto rows = features.rows();
  const auto nf = features.cols();
  const auto nc = targets.cols();

  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(nf + 1, nc);
  for (Eigen::Index c = 0; c < nc; ++c) {
    double positives = targets.col(c).sum();
    if (positives <= 0.0 || positives >= static_cast<double>(rows)) {
      continue;  // degenerate column stays zero
    }
    Eigen::VectorXd w = Eigen::VectorXd::Zero(nf + 1);
    for (int it = 0; it < config.iterations; ++it) {
      w -= config.step *
           logistic_regression_gradient(features, targets.col(c), w, config);
    }
    weights.col(c) = w;
  }
  return weights;
}

Eigen::MatrixXd logistic_regression_scores(const Eigen::MatrixXd& features,
                                           const Eigen::MatrixXd& weights) {
  return (features * weights.bottomRows(weights.rows() - 1)).rowwise() +
         weights.row(0);
}

namespace {

struct F1Counts {
  double tp = 0, fp = 0, fn = 0;
  double f1() const {
    double denom = 2 * tp + fp + fn;
    return denom > 0.0 ? 2 * tp / denom : 0.0;
  }
};

}  // namespace

EvalReport classify_eval(const HyperboloidEmbedding& emb,
                         const AttributedGraph& graph,
                         double labelled_fraction, std::uint64_t seed) {
  if (!graph.has_labels) throw ConfigError("classify_eval: no labels");
  if (labelled_fraction <= 0.0 || labelled_fraction >= 1.0) {
    throw ConfigError("classify_eval: labelled_fraction must be in (0,1)");
  }
  const int num_classes = static_cast<int>(graph.label_names.size());

  std::vector<int> labelled;
  for (int u = 0; u < graph.num_nodes(); ++u) {
    if (!graph.labels[u].empty()) labelled.push_back(u);
  }
  if (labelled.size() < 2) throw DataError("classify_eval: too few labels");

  // Stratified labelled sample: pick per class when single-label, else pick
  // uniformly and patch in one positive for any class the draw missed.
  Rng rng(derive_seed(seed, "classify-split"));
  std::vector<char> in_train(graph.num_nodes(), 0);
  std::size_t train_size = 0;
  auto want_total = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::llround(labelled_fraction *
                          static_cast<double>(labelled.size()))));
  if (!graph.multilabel) {
    std::vector<std::vector<int>> by_class(num_classes);
    for (int u : labelled) by_class[graph.labels[u][0]].push_back(u);
    for (auto& members : by_class) {
      if (members.empty()) continue;
      rng.shuffle(members);
      auto take = std::max<std::size_t>(
          1, static_cast<std::size_t>(
                 std::llround(labelled_fraction *
                              static_cast<double>(members.size()))));
      take = std::min(take, members.size() - 1);  // keep a test example
      if (take == 0) take = 1;
      for (std::size_t i = 0; i < take; ++i) {
        in_train[members[i]] = 1;
        ++train_size;
      }
    }
  } else {
    std::vector<int> pool = labelled;
    rng.shuffle(pool);
    for (std::size_t i = 0; i < want_total && i < pool.size(); ++i) {
      in_train[pool[i]] = 1;
      ++train_size;
    }
    for (int c = 0; c < num_classes; ++c) {
      bool covered = false;
      for (int u : labelled) {
        if (in_train[u] &&
            std::binary_search(graph.labels[u].begin(),
                               graph.labels[u].end(), c)) {
          covered = true;
          break;
        }
      }
      if (covered) continue;
      for (int u : pool) {
        if (!in_train[u] && std::binary_search(graph.labels[u].begin(),
                                               graph.labels[u].end(), c)) {
          in_train[u] = 1;
          ++train_size;
          break;
        }
      }
    }
  }
  if (train_size == 0 || train_size == labelled.size()) {
    throw DataError("classify_eval: degenerate labelled split");
  }

  // Klein coordinates are the classifier features.
  const int dim = emb.dim();
  auto klein_row = [&](int u) {
    return geo::to_klein(Eigen::VectorXd(emb.points.row(u)));
  };

  std::vector<int> train_nodes, test_nodes;
  for (int u : labelled) (in_train[u] ? train_nodes : test_nodes).push_back(u);

  Eigen::MatrixXd train_x(train_nodes.size(), dim);
  Eigen::MatrixXd train_y =
      Eigen::MatrixXd::Zero(train_nodes.size(), num_classes);
  for (std::size_t i = 0; i < train_nodes.size(); ++i) {
    train_x.row(i) = klein_row(train_nodes[i]).transpose();
    for (int c : graph.labels[train_nodes[i]]) train_y(i, c) = 1.0;
  }

  EvalReport report;
  report.task = "classification";
  report.seed = seed;
  report.dim = dim;
  report.params["labelled_fraction"] = std::to_string(labelled_fraction);

  for (int c = 0; c < num_classes; ++c) {
    if (train_y.col(c).sum() <= 0.0) {
      report.warnings.push_back("class '" + graph.label_names[c] +
                                "' absent from the labelled sample");
    }
  }

  Eigen::MatrixXd weights = logistic_regression_fit(train_x, train_y);

  Eigen::MatrixXd test_x(test_nodes.size(), dim);
  for (std::size_t i = 0; i < test_nodes.size(); ++i) {
    test_x.row(i) = klein_row(test_nodes[i]).transpose();
  }
  Eigen::MatrixXd scores = logistic_regression_scores(test_x, weights);

  F1Counts micro;
  std::vector<F1Counts> per_class(num_classes);
  for (std::size_t i = 0; i < test_nodes.size(); ++i) {
    const auto& truth = graph.labels[test_nodes[i]];
    std::vector<char> predicted(num_classes, 0);
    if (graph.multilabel) {
      for (int c = 0; c < num_classes; ++c) {
        predicted[c] = scores(i, c) > 0.0;  // sigmoid > 0.5
      }
    } else {
      Eigen::Index best;
      scores.row(i).maxCoeff(&best);
      predicted[best] = 1;
    }
    for (int c = 0; c < num_classes; ++c) {
      bool actual = std::binary_search(truth.begin(), truth.end(), c);
      if (predicted[c] && actual) {
        ++micro.tp;
        ++per_class[c].tp;
      } else if (predicted[c]) {
        ++micro.fp;
        ++per_class[c].fp;
      } else if (actual) {
        ++micro.fn;
        ++per_class[c].fn;
      }
    }
  }

  double macro = 0.0;
  for (const auto& counts : per_class) macro += counts.f1();
  macro /= static_cast<double>(num_classes);

  report.metrics["micro_f1"] = micro.f1();
  report.metrics["macro_f1"] = macro;
  return report;
}

std::string report_csv_rows(const EvalReport& report) {
  std::ostringstream params;
  bool first = true;
  for (const auto& [k, v] : report.params) {
    if (!first) params << ';';
    params << k << '=' << v;
    first = false;
  }
  if (report.subsampled_negatives) {
    if (!first) params << ';';
    params << "subsampled_negatives=1";
  }
  std::ostringstream out;
  for (const auto& [metric, value] : report.metrics) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    out << report.task << ',' << report.dim << ',' << report.alpha << ','
        << report.seed << ',' << metric << ',' << buf << ','
        << params.str() << '\n';
  }
  return out.str();
}

}  // namespace heat
