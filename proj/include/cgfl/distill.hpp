#pragma once

#include <random>
#include <vector>

#include "cgfl/pretrain.hpp"

namespace cgfl {

/// Frozen teacher (pre-trained encoder + one-layer head) and a freshly
/// initialized student with the online-style two-layer head.
struct DistillState {
  EncoderParams teacher_encoder;  // frozen
  Tensor teacher_head_W, teacher_head_b;
  EncoderParams student_encoder;
  HeadParams student_heads;  // online_* used; target_* unused
  AdamState adam;
  bool head_nonlinearity = true;

  /// Teacher = pre-training result (encoder + first online head layer);
  /// student = fresh Glorot init with identical shapes.
  static DistillState init(const PretrainResult& teacher, const EncoderConfig& cfg,
                           std::mt19937_64& rng);

  std::vector<Tensor> teacher_parameters() const;
  std::vector<Tensor> student_parameters() const;
};

/// Rows of both inputs L2-normalized, then mean row-wise squared distance
/// (= 2 - 2 cos); identical form to the contrastive loss.
Tensor distill_loss(Tape& tape, const Tensor& z_student, const Tensor& h_teacher);

/// One student update: independent views for teacher and student, paired
/// co-surviving nodes, Adam on the student only.
double distill_step(DistillState& state, const Graph& g, const AugmentConfig& aug,
                    const PretrainConfig& cfg, double lr, std::mt19937_64& rng);

struct DistillResult {
  EncoderParams student;
  HeadParams student_heads;
  std::vector<StepStat> trajectory;
  std::uint64_t teacher_hash_before = 0;
  std::uint64_t teacher_hash_after = 0;
};

/// Full distillation loop; reuses the pre-training schedule fields of `cfg`.
DistillResult distill(const PretrainResult& teacher, const Graph& g, const AugmentConfig& aug,
                      const PretrainConfig& cfg, const EncoderConfig& enc_cfg,
                      std::mt19937_64& rng);

/// Graph-corpus variant: teacher and student see independent views of each
/// graph; pairing is over readout embeddings.
DistillResult distill_graphs(const PretrainResult& teacher, const std::vector<Graph>& graphs,
                             const AugmentConfig& aug, const PretrainConfig& cfg,
                             const EncoderConfig& enc_cfg, std::mt19937_64& rng);

/// Mean distill_loss over `trials` fresh view pairs; the fidelity metric.
double distill_eval(const DistillState& state, const Graph& g, const AugmentConfig& aug,
                    int trials, std::mt19937_64& rng);

}  // namespace cgfl
