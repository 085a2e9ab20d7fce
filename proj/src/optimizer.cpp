#include "heat/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heat/errors.hpp"
#include "heat/geometry.hpp"

namespace heat {

namespace geo = heat::geometry;

double HyperboloidEmbedding::max_constraint_residual() const {
  double worst = 0.0;
  for (int u = 0; u < num_points(); ++u) {
    Eigen::VectorXd x = points.row(u);
    worst = std::max(worst, std::abs(geo::minkowski_inner(x, x) + 1.0));
  }
  return worst;
}

void TrainConfig::validate() const {
  if (learning_rate < 0.0) throw ConfigError("learning_rate must be >= 0");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (negatives < 1) throw ConfigError("negatives must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (sigma <= 0.0) throw ConfigError("sigma must be > 0");
}

HyperboloidEmbedding init_embedding(int num_nodes, int dim,
                                    std::uint64_t seed) {
  if (num_nodes < 1) throw ConfigError("init_embedding: need >= 1 node");
  if (dim < 2) throw ConfigError("init_embedding: dimension must be >= 2");
  HyperboloidEmbedding emb;
  emb.points.resize(num_nodes, dim + 1);
  Rng rng(derive_seed(seed, "init"));
  for (int u = 0; u < num_nodes; ++u) {
    for (int k = 1; k <= dim; ++k) {
      emb.points(u, k) = rng.uniform(-1e-3, 1e-3);
    }
    emb.points(u, 0) =
        std::sqrt(1.0 + emb.points.row(u).tail(dim).squaredNorm());
  }
  return emb;
}

namespace {

// arccosh(z)/sqrt(z^2-1) for z = -<x_u,x_v>, i.e. d/sinh(d); analytic
// limit 1 as d -> 0.
double gradient_prefactor(double dist) {
  if (dist < 1e-7) return 1.0;
  return dist / std::sinh(dist);
}

// Per-item scores, softmax, and loss. Gradients are accumulated only when
// grads != nullptr.
double process_item(const HyperboloidEmbedding& emb, const TrainItem& item,
                    double scale, bool symmetric_negatives,
                    std::map<int, Eigen::VectorXd>* grads) {
  const double sigma_sq = emb.sigma * emb.sigma;
  const auto& pts = emb.points;
  const int num_candidates = static_cast<int>(item.candidates.size());
  Eigen::VectorXd x_u = pts.row(item.u);

  std::vector<double> dist(num_candidates);
  std::vector<double> score(num_candidates);
  double max_score = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < num_candidates; ++j) {
    Eigen::VectorXd x_c = pts.row(item.candidates[j]);
    dist[j] = geo::distance(x_u, x_c);
    score[j] = -dist[j] * dist[j] / (2.0 * sigma_sq);
    max_score = std::max(max_score, score[j]);
  }
  double z = 0.0;
  for (int j = 0; j < num_candidates; ++j) {
    score[j] = std::exp(score[j] - max_score);
    z += score[j];
  }
  const int last = num_candidates - 1;
  double loss = -std::log(score[last] / z);

  if (grads) {
    auto accumulate = [&](int node, const Eigen::VectorXd& g) {
      auto [it, inserted] = grads->try_emplace(node);
      if (inserted) it->second = Eigen::VectorXd::Zero(pts.cols());
      it->second += g;
    };
    for (int j = 0; j < num_candidates; ++j) {
      double coef = score[j] / z - (j == last ? 1.0 : 0.0);
      double f = scale * coef * gradient_prefactor(dist[j]) / sigma_sq;
      if (f == 0.0) continue;
      Eigen::VectorXd x_c = pts.row(item.candidates[j]);
      accumulate(item.u, f * x_c);
      if (symmetric_negatives) accumulate(item.candidates[j], f * x_u);
    }
  }
  return loss;
}

}  // namespace

double pair_score(const HyperboloidEmbedding& emb, int u, int v) {
  double d = geo::distance(Eigen::VectorXd(emb.points.row(u)),
                           Eigen::VectorXd(emb.points.row(v)));
  return -d * d / (2.0 * emb.sigma * emb.sigma);
}

std::vector<double> softmax_probabilities(const HyperboloidEmbedding& emb,
                                          int u,
                                          const std::vector<int>& candidates) {
  if (candidates.empty()) {
    throw ConfigError("softmax_probabilities: no candidates");
  }
  std::vector<double> scores(candidates.size());
  double max_score = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    scores[j] = pair_score(emb, u, candidates[j]);
    max_score = std::max(max_score, scores[j]);
  }
  double z = 0.0;
  for (double& s : scores) {
    s = std::exp(s - max_score);
    z += s;
  }
  for (double& s : scores) s /= z;
  return scores;
}

double batch_loss(const HyperboloidEmbedding& emb,
                  const std::vector<TrainItem>& batch) {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  for (const auto& item : batch) {
    total += process_item(emb, item, 0.0, false, nullptr);
  }
  return total / static_cast<double>(batch.size());
}

std::map<int, Eigen::VectorXd> batch_gradients(
    const HyperboloidEmbedding& emb, const std::vector<TrainItem>& batch,
    bool symmetric_negatives) {
  std::map<int, Eigen::VectorXd> grads;
  if (batch.empty()) return grads;
  double scale = 1.0 / static_cast<double>(batch.size());
  for (const auto& item : batch) {
    process_item(emb, item, scale, symmetric_negatives, &grads);
  }
  return grads;
}

Eigen::VectorXd ambient_gradient(const HyperboloidEmbedding& emb, int u,
                                 const std::vector<TrainItem>& batch,
                                 bool symmetric_negatives) {
  auto grads = batch_gradients(emb, batch, symmetric_negatives);
  auto it = grads.find(u);
  if (it == grads.end()) return Eigen::VectorXd::Zero(emb.points.cols());
  return it->second;
}

TrainResult train(HyperboloidEmbedding& emb, const PairCorpus& corpus,
                  const TrainConfig& config) {
  config.validate();
  if (corpus.pairs.empty()) throw DataError("train: empty pair corpus");
  emb.sigma = config.sigma;

  TrainResult result;
  const auto num_pairs = corpus.pairs.size();
  std::vector<std::size_t> order(num_pairs);
  for (std::size_t i = 0; i < num_pairs; ++i) order[i] = i;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(derive_seed(config.seed, "batch-shuffle"),
                                static_cast<std::uint64_t>(epoch)));
    shuffle_rng.shuffle(order);
    Rng neg_rng(derive_seed(derive_seed(config.seed, "negatives"),
                            static_cast<std::uint64_t>(epoch)));

    double epoch_loss = 0.0;
    std::size_t num_batches = 0;
    for (std::size_t begin = 0; begin < num_pairs;
         begin += config.batch_size) {
      std::size_t end =
          std::min(begin + static_cast<std::size_t>(config.batch_size),
                   num_pairs);
      std::vector<TrainItem> batch;
      batch.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i) {
        auto [u, v] = corpus.pairs[order[i]];
        batch.push_back(
            {u, sample_negatives(corpus, u, v, config.negatives, neg_rng,
                                 &result.rejection_cap_hits)});
      }

      double loss = batch_loss(emb, batch);
      if (!std::isfinite(loss)) {
        throw NumericError("train: non-finite loss at epoch " +
                           std::to_string(epoch) + ", batch " +
                           std::to_string(num_batches));
      }
      epoch_loss += loss;
      ++num_batches;

      auto grads = batch_gradients(emb, batch, config.symmetric_negatives);
      for (const auto& [node, grad] : grads) {
        Eigen::VectorXd x = emb.points.row(node);
        Eigen::VectorXd step =
            -config.learning_rate * geo::project_to_tangent(x, grad);
        double norm = geo::tangent_norm(step);
        if (norm > geo::kMaxStepNorm) step *= geo::kMaxStepNorm / norm;
        Eigen::VectorXd updated = geo::exp_map(x, step);
        if (!updated.allFinite()) {
          throw NumericError("train: non-finite update at epoch " +
                             std::to_string(epoch) + ", batch " +
                             std::to_string(num_batches - 1) + ", node " +
                             std::to_string(node));
        }
        emb.points.row(node) = updated;
      }
    }
    result.epoch_losses.push_back(epoch_loss /
                                  static_cast<double>(num_batches));
  }
  return result;
}

}  // namespace heat
