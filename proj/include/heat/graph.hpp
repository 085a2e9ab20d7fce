#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace heat {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// An undirected attributed network. Immutable after load: node ids are
// mapped to dense indices 0..N-1, each undirected edge is stored once with
// u < v, and the symmetric adjacency is exposed as CSR.
struct AttributedGraph {
  std::vector<std::string> node_ids;
  std::unordered_map<std::string, int> index_of;

  std::vector<std::pair<int, int>> edges;  // u < v, stored once
  std::vector<std::size_t> adj_offsets;    // CSR over both directions
  std::vector<int> adj_nodes;
  std::vector<double> adj_weights;

  RowMatrix attributes;  // N x d; 0 x 0 when absent
  bool has_attributes = false;

  std::vector<std::vector<int>> labels;  // per node, sorted label indices
  std::vector<std::string> label_names;
  bool has_labels = false;
  bool multilabel = false;

  std::size_t dropped_self_loops = 0;
  std::size_t merged_duplicates = 0;

  int num_nodes() const { return static_cast<int>(node_ids.size()); }
  std::size_t num_edges() const { return edges.size(); }
  int num_attributes() const {
    return has_attributes ? static_cast<int>(attributes.cols()) : 0;
  }
  bool has_edge(int u, int v) const;
  double weight(int u, int v) const;  // 0 when no edge
};

// Row-stochastic transition table over the graph's edges, CSR layout.
// Each nonzero row sums to 1; rows of isolated nodes are empty.
struct SparseStochastic {
  std::vector<std::size_t> offsets;
  std::vector<int> cols;
  std::vector<double> probs;

  int num_rows() const { return static_cast<int>(offsets.size()) - 1; }
  bool row_empty(int u) const { return offsets[u] == offsets[u + 1]; }
  double row_sum(int u) const;
  double prob(int u, int v) const;
  // Draw from row u given a unit uniform; -1 for an empty row.
  int sample(int u, double unit) const;
};

// Dense row-stochastic table stored as per-row cumulative sums, so a draw
// is a binary search. prob() recovers entries by differencing.
struct DenseStochastic {
  RowMatrix cum;  // N x N; row cumulative sums, all-zero rows stay zero

  int num_rows() const { return static_cast<int>(cum.rows()); }
  bool row_empty(int u) const { return cum(u, cum.cols() - 1) <= 0.0; }
  double row_sum(int u) const { return cum(u, cum.cols() - 1); }
  double prob(int u, int v) const {
    return cum(u, v) - (v > 0 ? cum(u, v - 1) : 0.0);
  }
  int sample(int u, double unit) const;
};

// Walk step distributions: topo = row-normalized W, attr = row-normalized
// clamped cosine similarity with zero diagonal. attr is empty when the
// graph has no attributes.
struct TransitionTables {
  SparseStochastic topo;
  DenseStochastic attr;
  bool has_attr = false;
};

// Nodes above this count would need ~N^2 doubles for the dense similarity
// table; building one is refused past the threshold.
inline constexpr int kDenseSimilarityThreshold = 20000;

// Parse an attributed network. Edge lines are `src dst [weight]`, `#`
// comments allowed; attribute/label sources are CSV keyed by node id.
AttributedGraph load_graph(std::istream& edge_source,
                           std::istream* attribute_source = nullptr,
                           std::istream* label_source = nullptr);

AttributedGraph load_graph_files(const std::string& edge_path,
                                 const std::optional<std::string>& attr_path,
                                 const std::optional<std::string>& label_path);

// Per-column standardization to mean 0 and population standard deviation 1;
// zero-variance columns become all-zero columns.
AttributedGraph standardize_attributes(AttributedGraph graph);

// Y_uv = max(cos(X_u, X_v), 0) with zero diagonal. Dense; requires
// attributes and N <= kDenseSimilarityThreshold.
Eigen::MatrixXd attribute_similarity(const AttributedGraph& graph);

// Row-normalize W and Y into walk tables. Zero rows stay zero.
TransitionTables build_transition_tables(const AttributedGraph& graph,
                                         const Eigen::MatrixXd& similarity);

// Convenience: computes the similarity row by row, never holding Y and the
// table at the same time. With no attributes only `topo` is built.
TransitionTables build_transition_tables(const AttributedGraph& graph);

// The same node set and attributes with only the given edges; used for the
// link-prediction training graph.
AttributedGraph subgraph_with_edges(const AttributedGraph& graph,
                                    const std::vector<std::pair<int, int>>& keep);

}  // namespace heat
