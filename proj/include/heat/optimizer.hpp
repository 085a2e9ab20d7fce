#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "heat/graph.hpp"
#include "heat/sampler.hpp"

namespace heat {

// The learned model: one hyperboloid point per node, row-aligned with the
// graph's dense indices. Row layout is (x0, x1, ..., xn) with x0 the time
// coordinate.
struct HyperboloidEmbedding {
  RowMatrix points;  // N x (n+1)
  double sigma = 1.0;

  int num_points() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()) - 1; }
  // max over nodes of |<x,x> + 1|
  double max_constraint_residual() const;
};

struct TrainConfig {
  double learning_rate = 0.3;  // eta
  int epochs = 5;              // e_max
  int negatives = 10;          // m
  int batch_size = 50;         // b
  double sigma = 1.0;
  std::uint64_t seed = 1;
  // Negatives and contexts also receive the role-swapped gradient term;
  // off reduces to source-only updates for ablation.
  bool symmetric_negatives = true;

  void validate() const;
};

// One training unit: source u against the candidate set S_m(u,v), with the
// true context stored last.
struct TrainItem {
  int u = 0;
  std::vector<int> candidates;  // m negatives then v

  int context() const { return candidates.back(); }
};

struct TrainResult {
  std::vector<double> epoch_losses;  // mean batch loss per epoch
  std::uint64_t rejection_cap_hits = 0;
};

// Spatial coordinates i.i.d. uniform on [-1e-3, 1e-3], time coordinate from
// the constraint. Deterministic in seed.
HyperboloidEmbedding init_embedding(int num_nodes, int dim,
                                    std::uint64_t seed);

// o_uv = -d^2(x_u, x_v) / (2 sigma^2)
double pair_score(const HyperboloidEmbedding& emb, int u, int v);

// Softmax of o_uv' over the candidates, max-subtracted.
std::vector<double> softmax_probabilities(const HyperboloidEmbedding& emb,
                                          int u,
                                          const std::vector<int>& candidates);

// Mean over the batch of -log(softmax weight of the true context).
double batch_loss(const HyperboloidEmbedding& emb,
                  const std::vector<TrainItem>& batch);

// Ambient Minkowski gradients of the batch loss (time component sign
// flipped), one accumulator per touched node, each scaled by 1/batch size.
std::map<int, Eigen::VectorXd> batch_gradients(
    const HyperboloidEmbedding& emb, const std::vector<TrainItem>& batch,
    bool symmetric_negatives = true);

// The accumulator for a single node; zero vector when untouched.
Eigen::VectorXd ambient_gradient(const HyperboloidEmbedding& emb, int u,
                                 const std::vector<TrainItem>& batch,
                                 bool symmetric_negatives = true);

// Negative-sampling Riemannian SGD: per batch, gradients are accumulated
// against the batch-start snapshot, projected to each node's tangent
// space, scaled by -eta, clipped, and applied through the exponential map.
// Negatives are redrawn per epoch. Throws NumericError on non-finite loss.
TrainResult train(HyperboloidEmbedding& emb, const PairCorpus& corpus,
                  const TrainConfig& config);

}  // namespace heat
