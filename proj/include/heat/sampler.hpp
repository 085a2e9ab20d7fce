#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "heat/graph.hpp"
#include "heat/rng.hpp"

namespace heat {

struct WalkConfig {
  int walks_per_node = 10;  // s
  int walk_length = 80;     // l, steps after the start node
  int context_size = 3;     // c
  double alpha = 0.2;       // attribute-teleport probability
  std::uint64_t seed = 1;

  void validate() const;
};

struct WalkStats {
  std::uint64_t steps = 0;      // completed transitions
  std::uint64_t teleports = 0;  // steps taken from the attribute table
  std::uint64_t truncated_walks = 0;
};

// Teleport random walks: each step leaves node u through the attribute
// table with probability alpha and through the topology table otherwise;
// a zero row falls back to the other table, and a walk truncates when both
// rows are zero. s walks per node, start order shuffled per round.
// Deterministic in (tables, config): each (node, round) owns a derived
// RNG stream. Walks are returned sorted by (node, round).
std::vector<std::vector<int>> generate_walks(const TransitionTables& tables,
                                             const WalkConfig& config,
                                             WalkStats* stats = nullptr);

// Training corpus: the multiset D of ordered source-context pairs plus the
// unigram^{3/4} noise distribution over nodes.
struct PairCorpus {
  std::vector<std::pair<int, int>> pairs;       // D, both orientations
  std::vector<std::int64_t> occurrence_counts;  // walk positions per node
  std::vector<double> noise_weights;            // count^{3/4}
  std::vector<double> noise_cum;                // cumulative, for sampling
  std::vector<std::vector<int>> contexts;       // per source, sorted unique

  int num_nodes() const { return static_cast<int>(occurrence_counts.size()); }
  bool is_context(int u, int v) const;  // (u,v) in D?
};

// Slide a window of size context_size over each walk; every in-window pair
// enters D in both orientations, (u,u) pairs are skipped.
PairCorpus extract_pairs(const std::vector<std::vector<int>>& walks,
                         int context_size, int num_nodes);

// m draws with replacement from the noise distribution, rejecting nodes
// that form a context pair with u (capped at 100 redraws per slot, cap
// hits counted); the context v is appended last, giving m+1 entries.
std::vector<int> sample_negatives(const PairCorpus& corpus, int u, int v,
                                  int m, Rng& rng,
                                  std::uint64_t* cap_hits = nullptr);

}  // namespace heat
