#pragma once

#include <random>
#include <set>
#include <utility>
#include <vector>

#include "cgfl/encoder.hpp"
#include "cgfl/graph.hpp"
#include "cgfl/tensor.hpp"

namespace cgfl {

struct MetaConfig {
  double inner_lr = 0.01;   // alpha
  double outer_lr = 0.001;  // beta
  int inner_steps = 5;
  int tasks_per_batch = 4;
  int meta_epochs = 10;
  int outer_steps_per_epoch = 10;
  bool first_order = true;  // only first-order adaptation is implemented

  void validate() const;
};

struct EpisodeSpec {
  int n_way = 2;
  int k_shot = 3;
  int query_per_class = 10;
};

/// Episode instances and how to embed them: a single graph with node
/// instances, or a corpus of graphs with graph instances (mean readout).
struct TaskData {
  enum class Kind { kNode, kGraphLevel };
  Kind kind = Kind::kNode;
  const Graph* graph = nullptr;
  Tensor prop;  // cached propagation matrix (node task)
  const std::vector<Graph>* graphs = nullptr;
  std::vector<Tensor> props;

  static TaskData node_task(const Graph& g);
  static TaskData graph_task(const std::vector<Graph>& graphs);

  /// Label of an instance ref, for class-leak assertions.
  int label_of(int ref) const;

  /// One embedding row per instance ref, differentiable through `params`.
  Tensor embed(Tape& tape, const EncoderParams& params, const std::vector<int>& refs) const;
};

/// Per-class centroids of support embeddings, rows ordered by local class.
struct Prototypes {
  Tensor centroids;  // n_way x d
};

Prototypes build_prototypes(Tape& tape, const Tensor& support_emb, const Episode& episode);

/// Logits are negative squared Euclidean distances to each prototype;
/// returns (mean cross-entropy, query accuracy).
std::pair<Tensor, double> proto_loss(Tape& tape, const Tensor& query_emb,
                                     const std::vector<int>& query_labels,
                                     const Prototypes& protos);

/// `inner_steps` plain gradient-descent steps of size alpha on the
/// prototypical loss over the episode's support set. The support is split
/// per class into pseudo-support / pseudo-query halves; with k_shot < 2 the
/// whole support serves as both. Input params are not modified.
EncoderParams inner_adapt(const EncoderParams& params, const Episode& episode,
                          const TaskData& task, const MetaConfig& cfg);

/// Query loss/accuracy of an episode under fixed parameters.
std::pair<double, double> evaluate_episode(const EncoderParams& params, const Episode& episode,
                                           const TaskData& task);

struct MetaCurvePoint {
  int epoch = 0;
  double mean_query_acc = 0.0;
  double mean_query_loss = 0.0;
};

struct MetaTrainResult {
  EncoderParams params;
  std::vector<MetaCurvePoint> curve;
};

/// First-order MAML: per outer step, adapt tasks_per_batch episodes on
/// base classes, sum the query gradients taken at the adapted parameters,
/// and apply them to the meta-parameters with step size beta.
MetaTrainResult meta_train(const EncoderParams& init, const TaskData& task,
                           const LabeledPool& base_pool, const std::set<int>& base_classes,
                           const EpisodeSpec& ep, const MetaConfig& cfg, std::mt19937_64& rng);

struct MetaTestResult {
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  int episodes = 0;
};

/// Novel-class evaluation: inner-adapt per episode, no outer update.
/// `params` is unmodified.
MetaTestResult meta_test(const EncoderParams& params, const TaskData& task,
                         const LabeledPool& novel_pool, const std::set<int>& novel_classes,
                         const EpisodeSpec& ep, int episodes, const MetaConfig& cfg,
                         std::mt19937_64& rng);

}  // namespace cgfl
