#pragma once

#include <random>
#include <utility>
#include <vector>

#include "cgfl/graph.hpp"

namespace cgfl {

/// Which feature entries masking zeroes: whole dimensions (columns,
/// default) or independent per-node entries.
enum class MaskMode { kColumn, kEntry };

struct AugmentConfig {
  double node_drop_rate = 0.15;
  double edge_remove_rate = 0.15;
  double feature_mask_rate = 0.20;
  bool node_drop_enabled = true;
  bool edge_remove_enabled = true;
  bool feature_mask_enabled = true;
  MaskMode mask_mode = MaskMode::kColumn;

  void validate() const;
};

/// A stochastically augmented copy of a graph. kept_nodes[orig] is the
/// view index of a surviving node, or -1 if it was dropped.
struct AugmentedView {
  Graph graph;
  std::vector<int> kept_nodes;

  std::size_t num_kept() const { return graph.num_nodes; }
};

/// Node dropping, edge removing, and feature masking with independent
/// Bernoulli draws. If every node would drop, one uniformly random node is
/// force-kept. `force_keep` (if >= 0) pins one original node into the view.
AugmentedView augment_graph(const Graph& g, const AugmentConfig& cfg, std::mt19937_64& rng,
                            int force_keep = -1);

/// Two independent augmentations of the same graph with a guaranteed
/// non-empty kept-node intersection (resampled up to 10 times, then a
/// common node is force-kept).
std::pair<AugmentedView, AugmentedView> make_view_pair(const Graph& g, const AugmentConfig& cfg,
                                                       std::mt19937_64& rng);

/// Original node indices that survive in both views.
std::vector<int> common_kept_nodes(const AugmentedView& a, const AugmentedView& b);

}  // namespace cgfl
