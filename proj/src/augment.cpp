#include "cgfl/augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cgfl {

void AugmentConfig::validate() const {
  if (node_drop_rate < 0.0 || node_drop_rate >= 1.0) {
    throw std::invalid_argument("AugmentConfig: node_drop_rate must be in [0, 1)");
  }
  if (edge_remove_rate < 0.0 || edge_remove_rate > 1.0) {
    throw std::invalid_argument("AugmentConfig: edge_remove_rate must be in [0, 1]");
  }
  if (feature_mask_rate < 0.0 || feature_mask_rate > 1.0) {
    throw std::invalid_argument("AugmentConfig: feature_mask_rate must be in [0, 1]");
  }
}

AugmentedView augment_graph(const Graph& g, const AugmentConfig& cfg, std::mt19937_64& rng,
                            int force_keep) {
  cfg.validate();
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const double drop = cfg.node_drop_enabled ? cfg.node_drop_rate : 0.0;
  const double remove = cfg.edge_remove_enabled ? cfg.edge_remove_rate : 0.0;
  const double mask = cfg.feature_mask_enabled ? cfg.feature_mask_rate : 0.0;

  AugmentedView view;
  view.kept_nodes.assign(g.num_nodes, -1);
  std::vector<int> survivors;
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    const bool pinned = force_keep == static_cast<int>(i);
    if (pinned || coin(rng) >= drop) survivors.push_back(static_cast<int>(i));
  }
  if (survivors.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, g.num_nodes - 1);
    survivors.push_back(static_cast<int>(pick(rng)));
  }
  for (std::size_t v = 0; v < survivors.size(); ++v) {
    view.kept_nodes[static_cast<std::size_t>(survivors[v])] = static_cast<int>(v);
  }

  view.graph.num_nodes = survivors.size();
  for (const auto& [a, b] : g.edges) {
    const int va = view.kept_nodes[static_cast<std::size_t>(a)];
    const int vb = view.kept_nodes[static_cast<std::size_t>(b)];
    if (va < 0 || vb < 0) continue;
    if (coin(rng) < remove) continue;
    view.graph.edges.emplace_back(std::min(va, vb), std::max(va, vb));
  }

  const std::size_t d = g.feature_dim();
  view.graph.features = Tensor(survivors.size(), d);
  for (std::size_t v = 0; v < survivors.size(); ++v) {
    const auto orig = static_cast<std::size_t>(survivors[v]);
    for (std::size_t j = 0; j < d; ++j) view.graph.features(v, j) = g.features(orig, j);
  }

  if (mask > 0.0 && d > 0) {
    if (cfg.mask_mode == MaskMode::kColumn) {
      const auto num_masked = static_cast<std::size_t>(std::floor(mask * static_cast<double>(d)));
      std::vector<std::size_t> dims(d);
      for (std::size_t j = 0; j < d; ++j) dims[j] = j;
      std::shuffle(dims.begin(), dims.end(), rng);
      for (std::size_t k = 0; k < num_masked; ++k) {
        for (std::size_t v = 0; v < survivors.size(); ++v) view.graph.features(v, dims[k]) = 0.0;
      }
    } else {
      for (std::size_t v = 0; v < survivors.size(); ++v) {
        for (std::size_t j = 0; j < d; ++j) {
          if (coin(rng) < mask) view.graph.features(v, j) = 0.0;
        }
      }
    }
  }

  view.graph.validate();
  return view;
}

std::vector<int> common_kept_nodes(const AugmentedView& a, const AugmentedView& b) {
  std::vector<int> common;
  for (std::size_t i = 0; i < a.kept_nodes.size(); ++i) {
    if (a.kept_nodes[i] >= 0 && b.kept_nodes[i] >= 0) common.push_back(static_cast<int>(i));
  }
  return common;
}

std::pair<AugmentedView, AugmentedView> make_view_pair(const Graph& g, const AugmentConfig& cfg,
                                                       std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 10; ++attempt) {
    AugmentedView a = augment_graph(g, cfg, rng);
    AugmentedView b = augment_graph(g, cfg, rng);
    if (!common_kept_nodes(a, b).empty()) return {std::move(a), std::move(b)};
  }
  std::uniform_int_distribution<std::size_t> pick(0, g.num_nodes - 1);
  const int pinned = static_cast<int>(pick(rng));
  AugmentedView a = augment_graph(g, cfg, rng, pinned);
  AugmentedView b = augment_graph(g, cfg, rng, pinned);
  return {std::move(a), std::move(b)};
}

}  // namespace cgfl
