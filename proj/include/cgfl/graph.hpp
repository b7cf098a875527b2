#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cgfl/tensor.hpp"

namespace cgfl {

/// Undirected graph with dense node features. Edges are stored once with
/// src < dst, no self-loops (self-loops enter via normalization).
struct Graph {
  std::size_t num_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  Tensor features;                 // num_nodes x feature_dim
  std::vector<int> node_labels;    // empty when unlabeled
  int graph_label = -1;            // -1 when unlabeled

  std::size_t feature_dim() const { return features.defined() ? features.cols() : 0; }
  bool has_node_labels() const { return !node_labels.empty(); }
  int num_classes() const;

  /// Checks edge-range, duplicate, self-loop, and feature-shape invariants.
  void validate() const;

  Graph without_labels() const;
};

/// Adds an edge in canonical order; duplicate and self-loop edges are ignored.
void add_edge(Graph& g, int a, int b);

/// Symmetric GCN propagation matrix with self-loops:
/// D^(-1/2) (A + I) D^(-1/2), dense num_nodes x num_nodes.
Tensor propagation_matrix(const Graph& g);

/// Plain-text citation format.
///   node file: id<TAB>f1 f2 ... fd<TAB>label
///   edge file: src<TAB>dst   (undirected; duplicates ignored)
Graph load_citation_dataset(const std::string& node_file, const std::string& edge_file);
void save_citation_dataset(const Graph& g, const std::string& node_file,
                           const std::string& edge_file);

/// Stochastic-block-model fixture: node label = block id, features =
/// one-hot block centroid plus Gaussian noise (sigma = 2, large on purpose
/// so raw features alone classify poorly). Deterministic per seed.
Graph synth_sbm(std::size_t blocks, std::size_t nodes_per_block, double p_in, double p_out,
                std::size_t feature_dim, std::uint64_t seed);

/// Subgraph induced by `nodes` (original indices, deduplicated order
/// preserved); labels are carried over when present.
Graph induced_subgraph(const Graph& g, const std::vector<int>& nodes);

/// Disjoint base/novel class-id sets; both non-empty.
struct ClassSplit {
  std::set<int> base_classes;
  std::set<int> novel_classes;

  ClassSplit(std::set<int> base, std::set<int> novel);
};

/// Default split: the `num_novel` highest class ids become novel classes.
ClassSplit default_split(const Graph& g, std::size_t num_novel = 2);

/// class id -> instance refs (node or graph indices).
using LabeledPool = std::map<int, std::vector<int>>;

LabeledPool pool_from_graph(const Graph& g, const std::set<int>& classes);
LabeledPool pool_from_graph_labels(const std::vector<Graph>& graphs, const std::set<int>& classes);

/// One N-way K-shot task. Entries are (instance ref, local class in
/// [0, n_way)); support holds exactly k_shot per local class.
struct Episode {
  int n_way = 0;
  int k_shot = 0;
  std::vector<std::pair<int, int>> support;
  std::vector<std::pair<int, int>> query;

  void validate() const;
};

Episode sample_episode(const LabeledPool& pool, const std::set<int>& classes, int n_way,
                       int k_shot, int query_per_class, std::mt19937_64& rng);

/// Keeps ceil(rate * count) instances per class, uniformly at random.
LabeledPool apply_label_rate(const LabeledPool& pool, double rate, std::mt19937_64& rng);

}  // namespace cgfl
