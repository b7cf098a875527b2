#pragma once

#include <optional>
#include <random>
#include <vector>

#include "cgfl/augment.hpp"
#include "cgfl/encoder.hpp"
#include "cgfl/graph.hpp"
#include "cgfl/tensor.hpp"

namespace cgfl {

enum class Setting { kInductive, kTransductive };

struct PretrainConfig {
  double lr = 0.05;
  double lr_decay = 0.9;  // multiplicative, per epoch
  double tau = 0.999;
  int epochs = 20;
  int steps_per_epoch = 10;
  std::size_t batch_nodes = 2048;
  Setting setting = Setting::kInductive;
  bool symmetric_loss = true;
  bool track_embed_std = true;

  void validate() const;
};

/// Online branch (trained) and target branch (EMA of the online encoder and
/// of the online head's first layer; never carries gradients).
struct ContrastiveState {
  EncoderParams online_encoder;
  HeadParams heads;  // online_* trained; target_* EMA'd
  EncoderParams target_encoder;
  AdamState adam;
  int epoch = 0;
  bool head_nonlinearity = true;

  static ContrastiveState init(const EncoderConfig& cfg, std::mt19937_64& rng);

  std::vector<Tensor> trainable_parameters() const;
  std::vector<Tensor> target_parameters() const;
  /// ξ <- τξ + (1-τ)θ over encoder params and the head first layer.
  void ema_step(double tau);
};

/// Mean over paired rows of 2 - 2 cos(z_i, h_i); scalar in [0, 4].
Tensor contrastive_loss(Tape& tape, const Tensor& z_online, const Tensor& h_target);

struct StepStat {
  int step = 0;
  double loss = 0.0;
  double embed_std = 0.0;  // mean per-dimension stddev of normalized embeddings
};

/// One contrastive step on a node-level graph: view pair, co-surviving node
/// pairing (capped at batch_nodes), symmetrized loss, Adam on the online
/// branch, EMA on the target. Returns the loss value.
double pretrain_step(ContrastiveState& state, const Graph& g, const AugmentConfig& aug,
                     const PretrainConfig& cfg, double lr, std::mt19937_64& rng);

/// Graph-level variant: pairs readout embeddings across a batch of graphs.
double pretrain_step_graphs(ContrastiveState& state, const std::vector<Graph>& graphs,
                            const AugmentConfig& aug, const PretrainConfig& cfg, double lr,
                            std::mt19937_64& rng);

struct PretrainResult {
  EncoderParams encoder;  // final online encoder
  HeadParams heads;
  std::vector<StepStat> trajectory;
};

/// Full pre-training loop. Labels are stripped on entry and never read.
/// Inductive: only g_train; transductive: steps alternate over g_train and
/// g_test (required).
PretrainResult pretrain(const Graph& g_train, const std::optional<Graph>& g_test,
                        const AugmentConfig& aug, const PretrainConfig& cfg,
                        const EncoderConfig& enc_cfg, std::mt19937_64& rng);

/// Graph-task loop over a multi-graph corpus.
PretrainResult pretrain_graphs(const std::vector<Graph>& graphs, const AugmentConfig& aug,
                               const PretrainConfig& cfg, const EncoderConfig& enc_cfg,
                               std::mt19937_64& rng);

/// Mean per-dimension stddev of row-normalized encoder outputs; the
/// collapse diagnostic.
double embedding_std(const EncoderParams& p, const Graph& g);

}  // namespace cgfl
