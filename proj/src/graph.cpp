#include "heat/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "heat/errors.hpp"

namespace heat {
namespace {

void strip_bom(std::string& line) {
  if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' &&
      line[2] == '\xBF') {
    line.erase(0, 3);
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw DataError(where + ": not a number: '" + s + "'");
  }
  if (pos != s.size()) {
    throw DataError(where + ": trailing characters in number: '" + s + "'");
  }
  return v;
}

struct EdgeAccumulator {
  // Per canonical pair (u<v): accumulated weight in each orientation.
  // The undirected weight is the max of the two, so a symmetric
  // restatement of an edge does not double it while a true duplicate
  // line (same orientation) sums.
  std::map<std::pair<int, int>, std::pair<double, double>> acc;

  void add(int u, int v, double w) {
    bool forward = u < v;
    auto key = forward ? std::make_pair(u, v) : std::make_pair(v, u);
    auto& slot = acc[key];
    (forward ? slot.first : slot.second) += w;
  }
};

}  // namespace

bool AttributedGraph::has_edge(int u, int v) const {
  for (std::size_t i = adj_offsets[u]; i < adj_offsets[u + 1]; ++i) {
    if (adj_nodes[i] == v) return true;
  }
  return false;
}

double AttributedGraph::weight(int u, int v) const {
  for (std::size_t i = adj_offsets[u]; i < adj_offsets[u + 1]; ++i) {
    if (adj_nodes[i] == v) return adj_weights[i];
  }
  return 0.0;
}

double SparseStochastic::row_sum(int u) const {
  double s = 0.0;
  for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) s += probs[i];
  return s;
}

double SparseStochastic::prob(int u, int v) const {
  for (std::size_t i = offsets[u]; i < offsets[u + 1]; ++i) {
    if (cols[i] == v) return probs[i];
  }
  return 0.0;
}

int SparseStochastic::sample(int u, double unit) const {
  if (row_empty(u)) return -1;
  double acc = 0.0;
  std::size_t last = offsets[u + 1] - 1;
  for (std::size_t i = offsets[u]; i < last; ++i) {
    acc += probs[i];
    if (unit < acc) return cols[i];
  }
  return cols[last];
}

int DenseStochastic::sample(int u, double unit) const {
  if (row_empty(u)) return -1;
  const double* begin = cum.data() + static_cast<std::size_t>(u) * cum.cols();
  const double* end = begin + cum.cols();
  const double* it = std::upper_bound(begin, end, unit);
  if (it == end) --it;
  auto idx = static_cast<int>(it - begin);
  // Never land on a zero-probability column when rounding pushes the
  // search past the true total.
  while (idx > 0 && begin[idx] == begin[idx - 1]) --idx;
  return idx;
}

AttributedGraph load_graph(std::istream& edge_source,
                           std::istream* attribute_source,
                           std::istream* label_source) {
  AttributedGraph g;
  EdgeAccumulator acc;

  auto intern = [&g](const std::string& id) {
    auto [it, inserted] = g.index_of.try_emplace(id, g.num_nodes());
    if (inserted) g.node_ids.push_back(id);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  std::size_t directed_records = 0;
  while (std::getline(edge_source, line)) {
    ++line_no;
    if (line_no == 1) strip_bom(line);
    strip_cr(line);
    std::string where = "edge list line " + std::to_string(line_no);
    std::stringstream ss(line);
    std::string src, dst, wtok, extra;
    if (!(ss >> src)) continue;  // blank line
    if (src[0] == '#') continue;
    if (!(ss >> dst)) throw DataError(where + ": expected `src dst [weight]`");
    double w = 1.0;
    if (ss >> wtok) {
      w = parse_double(wtok, where);
      if (ss >> extra) throw DataError(where + ": too many fields");
    }
    if (w < 0.0) throw DataError(where + ": negative weight");
    int u = intern(src);
    int v = intern(dst);
    if (u == v) {
      ++g.dropped_self_loops;
      continue;
    }
    ++directed_records;
    acc.add(u, v, w);
  }

  const int n = g.num_nodes();
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& [key, sums] : acc.acc) {
    double w = std::max(sums.first, sums.second);
    if (w <= 0.0) continue;
    g.edges.push_back(key);
    adj[key.first].emplace_back(key.second, w);
    adj[key.second].emplace_back(key.first, w);
  }
  g.merged_duplicates = directed_records - g.edges.size();

  g.adj_offsets.assign(n + 1, 0);
  for (int u = 0; u < n; ++u) {
    std::sort(adj[u].begin(), adj[u].end());
    g.adj_offsets[u + 1] = g.adj_offsets[u] + adj[u].size();
    for (auto [v, w] : adj[u]) {
      g.adj_nodes.push_back(v);
      g.adj_weights.push_back(w);
    }
  }

  if (attribute_source) {
    std::string hline;
    if (!std::getline(*attribute_source, hline)) {
      throw DataError("attribute file: empty");
    }
    strip_bom(hline);
    strip_cr(hline);
    auto header = split_csv(hline);
    if (header.size() < 2 || header[0] != "id") {
      throw DataError("attribute file: header must be `id,f1,...,fd`");
    }
    const int d = static_cast<int>(header.size()) - 1;
    g.attributes.setZero(n, d);
    std::vector<bool> seen(n, false);
    std::size_t row_no = 1;
    while (std::getline(*attribute_source, line)) {
      ++row_no;
      strip_cr(line);
      if (line.empty()) continue;
      std::string where = "attribute file line " + std::to_string(row_no);
      auto fields = split_csv(line);
      if (static_cast<int>(fields.size()) != d + 1) {
        throw DataError(where + ": expected " + std::to_string(d + 1) +
                        " fields, got " + std::to_string(fields.size()));
      }
      auto it = g.index_of.find(fields[0]);
      if (it == g.index_of.end()) {
        throw DataError(where + ": unknown node id '" + fields[0] + "'");
      }
      if (seen[it->second]) {
        throw DataError(where + ": duplicate attribute row for '" + fields[0] +
                        "'");
      }
      seen[it->second] = true;
      for (int k = 0; k < d; ++k) {
        g.attributes(it->second, k) = parse_double(fields[k + 1], where);
      }
    }
    for (int u = 0; u < n; ++u) {
      if (!seen[u]) {
        throw DataError("attribute file: no row for node '" + g.node_ids[u] +
                        "'");
      }
    }
    g.has_attributes = true;
  }

  if (label_source) {
    g.labels.assign(n, {});
    std::unordered_map<std::string, int> label_index;
    auto intern_label = [&](const std::string& name) {
      auto [it, inserted] = label_index.try_emplace(
          name, static_cast<int>(g.label_names.size()));
      if (inserted) g.label_names.push_back(name);
      return it->second;
    };
    std::size_t row_no = 0;
    bool first = true;
    while (std::getline(*label_source, line)) {
      ++row_no;
      if (first) {
        strip_bom(line);
        first = false;
      }
      strip_cr(line);
      if (line.empty()) continue;
      std::string where = "label file line " + std::to_string(row_no);
      auto fields = split_csv(line);
      if (fields.size() != 2) {
        throw DataError(where + ": expected `id,label`");
      }
      if (row_no == 1 && fields[0] == "id") continue;  // optional header
      auto it = g.index_of.find(fields[0]);
      if (it == g.index_of.end()) {
        throw DataError(where + ": unknown node id '" + fields[0] + "'");
      }
      std::stringstream ls(fields[1]);
      std::string tok;
      std::vector<int>& slot = g.labels[it->second];
      while (std::getline(ls, tok, ';')) {
        if (tok.empty()) continue;
        slot.push_back(intern_label(tok));
      }
      std::sort(slot.begin(), slot.end());
      slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
      if (slot.size() > 1) g.multilabel = true;
    }
    g.has_labels = true;
  }

  return g;
}

AttributedGraph load_graph_files(const std::string& edge_path,
                                 const std::optional<std::string>& attr_path,
                                 const std::optional<std::string>& label_path) {
  std::ifstream edges(edge_path);
  if (!edges) throw DataError("cannot open edge file: " + edge_path);
  std::ifstream attrs, labels;
  if (attr_path) {
    attrs.open(*attr_path);
    if (!attrs) throw DataError("cannot open attribute file: " + *attr_path);
  }
  if (label_path) {
    labels.open(*label_path);
    if (!labels) throw DataError("cannot open label file: " + *label_path);
  }
  return load_graph(edges, attr_path ? &attrs : nullptr,
                    label_path ? &labels : nullptr);
}

AttributedGraph standardize_attributes(AttributedGraph graph) {
  if (!graph.has_attributes) {
    throw ConfigError("standardize_attributes: graph has no attributes");
  }
  const auto n = graph.attributes.rows();
  for (Eigen::Index c = 0; c < graph.attributes.cols(); ++c) {
    auto col = graph.attributes.col(c);
    double mean = col.mean();
    col.array() -= mean;
    double var = col.squaredNorm() / static_cast<double>(n);  // population
    if (var > 0.0) {
      col /= std::sqrt(var);
    } else {
      col.setZero();
    }
  }
  return graph;
}

Eigen::MatrixXd attribute_similarity(const AttributedGraph& graph) {
  if (!graph.has_attributes) {
    throw ConfigError("attribute_similarity: graph has no attributes");
  }
  const int n = graph.num_nodes();
  if (n > kDenseSimilarityThreshold) {
    throw ConfigError("attribute_similarity: graph too large for a dense "
                      "similarity matrix");
  }
  RowMatrix unit = graph.attributes;
  for (int u = 0; u < n; ++u) {
    double norm = unit.row(u).norm();
    if (norm > 0.0) unit.row(u) /= norm;
  }
  Eigen::MatrixXd y = (unit * unit.transpose()).cwiseMax(0.0).cwiseMin(1.0);
  y.diagonal().setZero();
  return y;
}

namespace {

SparseStochastic normalize_adjacency(const AttributedGraph& g) {
  SparseStochastic t;
  t.offsets = g.adj_offsets;
  t.cols = g.adj_nodes;
  t.probs = g.adj_weights;
  for (int u = 0; u < g.num_nodes(); ++u) {
    double s = 0.0;
    for (std::size_t i = t.offsets[u]; i < t.offsets[u + 1]; ++i) {
      s += t.probs[i];
    }
    if (s > 0.0) {
      for (std::size_t i = t.offsets[u]; i < t.offsets[u + 1]; ++i) {
        t.probs[i] /= s;
      }
    }
  }
  return t;
}

void cumulate_row(Eigen::Ref<Eigen::RowVectorXd> row) {
  double s = row.sum();
  if (s <= 0.0) {
    row.setZero();
    return;
  }
  double acc = 0.0;
  for (Eigen::Index v = 0; v < row.size(); ++v) {
    acc += row(v) / s;
    row(v) = acc;
  }
}

}  // namespace

TransitionTables build_transition_tables(const AttributedGraph& graph,
                                         const Eigen::MatrixXd& similarity) {
  TransitionTables t;
  t.topo = normalize_adjacency(graph);
  t.attr.cum = similarity;
  for (int u = 0; u < graph.num_nodes(); ++u) {
    cumulate_row(t.attr.cum.row(u));
  }
  t.has_attr = true;
  return t;
}

TransitionTables build_transition_tables(const AttributedGraph& graph) {
  TransitionTables t;
  t.topo = normalize_adjacency(graph);
  if (!graph.has_attributes) return t;

  const int n = graph.num_nodes();
  if (n > kDenseSimilarityThreshold) {
    throw ConfigError("build_transition_tables: graph too large for a dense "
                      "attribute table");
  }
  RowMatrix unit = graph.attributes;
  for (int u = 0; u < n; ++u) {
    double norm = unit.row(u).norm();
    if (norm > 0.0) unit.row(u) /= norm;
  }
  // Similarity rows are computed in blocks and normalized in place, so the
  // raw similarity matrix is never held alongside the table.
  t.attr.cum.resize(n, n);
  constexpr int kBlock = 256;
  for (int start = 0; start < n; start += kBlock) {
    int rows = std::min(kBlock, n - start);
    t.attr.cum.middleRows(start, rows) =
        (unit.middleRows(start, rows) * unit.transpose())
            .cwiseMax(0.0)
            .cwiseMin(1.0);
    for (int u = start; u < start + rows; ++u) {
      t.attr.cum(u, u) = 0.0;
      cumulate_row(t.attr.cum.row(u));
    }
  }
  t.has_attr = true;
  return t;
}

AttributedGraph subgraph_with_edges(
    const AttributedGraph& graph,
    const std::vector<std::pair<int, int>>& keep) {
  AttributedGraph g = graph;
  g.edges.clear();
  g.adj_offsets.clear();
  g.adj_nodes.clear();
  g.adj_weights.clear();

  const int n = g.num_nodes();
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (auto [u, v] : keep) {
    double w = graph.weight(u, v);
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
    adj[u].emplace_back(v, w);
    adj[v].emplace_back(u, w);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.adj_offsets.assign(n + 1, 0);
  for (int u = 0; u < n; ++u) {
    std::sort(adj[u].begin(), adj[u].end());
    g.adj_offsets[u + 1] = g.adj_offsets[u] + adj[u].size();
    for (auto [v, w] : adj[u]) {
      g.adj_nodes.push_back(v);
      g.adj_weights.push_back(w);
    }
  }
  return g;
}

}  // namespace heat
