#include "heat/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "heat/errors.hpp"

namespace heat {

void WalkConfig::validate() const {
  if (walks_per_node < 1) throw ConfigError("walks_per_node must be >= 1");
  if (walk_length < 2) throw ConfigError("walk_length must be >= 2");
  if (context_size < 1) throw ConfigError("context_size must be >= 1");
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must be in [0,1]");
}

namespace {

// One step out of u, or -1 when both rows are dead.
int step_from(const TransitionTables& tables, int u, double alpha, Rng& rng,
              WalkStats& stats) {
  bool teleport = tables.has_attr && alpha > 0.0 && rng.uniform() < alpha;
  int next = -1;
  bool teleported = teleport;
  if (teleport) {
    next = tables.attr.sample(u, rng.uniform());
    if (next < 0) {  // dead attribute row: fall back to topology
      next = tables.topo.sample(u, rng.uniform());
      teleported = false;
    }
  } else {
    next = tables.topo.sample(u, rng.uniform());
    if (next < 0 && tables.has_attr && alpha > 0.0) {
      next = tables.attr.sample(u, rng.uniform());
      teleported = next >= 0;
    }
  }
  if (next >= 0) {
    ++stats.steps;
    if (teleported) ++stats.teleports;
  }
  return next;
}

}  // namespace

std::vector<std::vector<int>> generate_walks(const TransitionTables& tables,
                                             const WalkConfig& config,
                                             WalkStats* stats) {
  config.validate();
  const int n = tables.topo.num_rows();
  WalkStats local;
  WalkStats& st = stats ? *stats : local;

  std::vector<std::vector<int>> walks(
      static_cast<std::size_t>(n) * config.walks_per_node);
  std::vector<int> order(n);
  for (int u = 0; u < n; ++u) order[u] = u;

  for (int round = 0; round < config.walks_per_node; ++round) {
    Rng shuffle_rng(derive_seed(derive_seed(config.seed, "walk-order"),
                                static_cast<std::uint64_t>(round)));
    shuffle_rng.shuffle(order);
    for (int start : order) {
      Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(start),
                          static_cast<std::uint64_t>(round)));
      std::vector<int> walk;
      walk.reserve(config.walk_length + 1);
      walk.push_back(start);
      int u = start;
      for (int i = 0; i < config.walk_length; ++i) {
        int next = step_from(tables, u, config.alpha, rng, st);
        if (next < 0) {
          ++st.truncated_walks;
          break;
        }
        walk.push_back(next);
        u = next;
      }
      // (node, round) slot keeps the persisted order reproducible
      walks[static_cast<std::size_t>(start) * config.walks_per_node + round] =
          std::move(walk);
    }
  }
  return walks;
}

bool PairCorpus::is_context(int u, int v) const {
  const auto& row = contexts[u];
  return std::binary_search(row.begin(), row.end(), v);
}

PairCorpus extract_pairs(const std::vector<std::vector<int>>& walks,
                         int context_size, int num_nodes) {
  if (walks.empty()) throw ConfigError("extract_pairs: no walks");
  PairCorpus corpus;
  corpus.occurrence_counts.assign(num_nodes, 0);
  corpus.contexts.assign(num_nodes, {});

  for (const auto& walk : walks) {
    const int len = static_cast<int>(walk.size());
    for (int i = 0; i < len; ++i) {
      ++corpus.occurrence_counts[walk[i]];
      for (int j = 1; j <= context_size && i + j < len; ++j) {
        int a = walk[i];
        int b = walk[i + j];
        if (a == b) continue;
        corpus.pairs.emplace_back(a, b);
        corpus.pairs.emplace_back(b, a);
      }
    }
  }

  for (auto [u, v] : corpus.pairs) corpus.contexts[u].push_back(v);
  for (auto& row : corpus.contexts) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }

  corpus.noise_weights.resize(num_nodes);
  corpus.noise_cum.resize(num_nodes);
  double acc = 0.0;
  for (int u = 0; u < num_nodes; ++u) {
    corpus.noise_weights[u] =
        std::pow(static_cast<double>(corpus.occurrence_counts[u]), 0.75);
    acc += corpus.noise_weights[u];
    corpus.noise_cum[u] = acc;
  }
  return corpus;
}

std::vector<int> sample_negatives(const PairCorpus& corpus, int u, int v,
                                  int m, Rng& rng, std::uint64_t* cap_hits) {
  if (m < 1) throw ConfigError("sample_negatives: m must be >= 1");
  double total = corpus.noise_cum.empty() ? 0.0 : corpus.noise_cum.back();
  if (total <= 0.0) {
    throw DataError("sample_negatives: empty noise distribution");
  }

  auto draw = [&]() {
    double r = rng.uniform() * total;
    auto it = std::upper_bound(corpus.noise_cum.begin(),
                               corpus.noise_cum.end(), r);
    if (it == corpus.noise_cum.end()) --it;
    auto idx = static_cast<int>(it - corpus.noise_cum.begin());
    while (idx > 0 && corpus.noise_cum[idx] == corpus.noise_cum[idx - 1]) {
      --idx;
    }
    return idx;
  };

  std::vector<int> out;
  out.reserve(m + 1);
  for (int i = 0; i < m; ++i) {
    int candidate = draw();
    int attempts = 0;
    while (corpus.is_context(u, candidate) && attempts < 100) {
      candidate = draw();
      ++attempts;
    }
    if (corpus.is_context(u, candidate) && cap_hits) ++(*cap_hits);
    out.push_back(candidate);
  }
  out.push_back(v);
  return out;
}

}  // namespace heat
