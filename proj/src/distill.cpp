#include "cgfl/distill.hpp"

#include <algorithm>
#include <stdexcept>

namespace cgfl {

DistillState DistillState::init(const PretrainResult& teacher, const EncoderConfig& cfg,
                                std::mt19937_64& rng) {
  DistillState s;
  s.teacher_encoder = teacher.encoder.clone();
  s.teacher_encoder.set_requires_grad(false);
  s.teacher_head_W = teacher.heads.online_W1.clone();
  s.teacher_head_b = teacher.heads.online_b1.clone();
  s.teacher_head_W.set_requires_grad(false);
  s.teacher_head_b.set_requires_grad(false);
  if (s.teacher_encoder.W1.rows() != cfg.d_in || s.teacher_encoder.W1.cols() != cfg.d_hidden) {
    throw std::runtime_error("distill: teacher checkpoint shape mismatch");
  }
  s.student_encoder = EncoderParams::glorot(cfg, rng);
  s.student_heads = HeadParams::glorot(cfg, rng);
  s.head_nonlinearity = cfg.head_nonlinearity;
  return s;
}

std::vector<Tensor> DistillState::teacher_parameters() const {
  std::vector<Tensor> params = teacher_encoder.parameters();
  params.push_back(teacher_head_W);
  params.push_back(teacher_head_b);
  return params;
}

std::vector<Tensor> DistillState::student_parameters() const {
  std::vector<Tensor> params = student_encoder.parameters();
  for (const Tensor& t : student_heads.online_parameters()) params.push_back(t);
  return params;
}

Tensor distill_loss(Tape& tape, const Tensor& z_student, const Tensor& h_teacher) {
  return contrastive_loss(tape, z_student, h_teacher);
}

namespace {

double pair_loss(Tape& tape, const DistillState& state, const AugmentedView& student_view,
                 const AugmentedView& teacher_view, const std::vector<int>& common,
                 Tensor& loss_out) {
  EncodeResult stu = encode_view(tape, state.student_encoder, student_view);
  Tensor z = project(tape, state.student_heads, stu.out, Branch::kOnline,
                     state.head_nonlinearity);
  EncodeResult tea = encode_view(tape, state.teacher_encoder, teacher_view);
  Tensor h = add_row(tape, matmul(tape, tea.out, state.teacher_head_W), state.teacher_head_b);

  std::vector<std::size_t> stu_rows, tea_rows;
  for (int orig : common) {
    stu_rows.push_back(static_cast<std::size_t>(student_view.kept_nodes[orig]));
    tea_rows.push_back(static_cast<std::size_t>(teacher_view.kept_nodes[orig]));
  }
  loss_out = distill_loss(tape, gather_rows(tape, z, stu_rows), gather_rows(tape, h, tea_rows));
  return loss_out.item();
}

}  // namespace

double distill_step(DistillState& state, const Graph& g, const AugmentConfig& aug,
                    const PretrainConfig& cfg, double lr, std::mt19937_64& rng) {
  auto [teacher_view, student_view] = make_view_pair(g, aug, rng);
  std::vector<int> common = common_kept_nodes(teacher_view, student_view);
  if (common.size() > cfg.batch_nodes) {
    std::shuffle(common.begin(), common.end(), rng);
    common.resize(cfg.batch_nodes);
  }
  Tape tape;
  Tensor loss;
  pair_loss(tape, state, student_view, teacher_view, common, loss);
  const double loss_value = loss.item();
  tape.backward(loss);
  std::vector<Tensor> params = state.student_parameters();
  adam_step(params, state.adam, lr);
  return loss_value;
}

DistillResult distill(const PretrainResult& teacher, const Graph& g, const AugmentConfig& aug,
                      const PretrainConfig& cfg, const EncoderConfig& enc_cfg,
                      std::mt19937_64& rng) {
  cfg.validate();
  const Graph unlabeled = g.without_labels();
  DistillState state = DistillState::init(teacher, enc_cfg, rng);
  DistillResult result;
  result.teacher_hash_before = content_hash(state.teacher_parameters());

  double lr = cfg.lr;
  int step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int s = 0; s < cfg.steps_per_epoch; ++s) {
      const double loss = distill_step(state, unlabeled, aug, cfg, lr, rng);
      result.trajectory.push_back({step++, loss, 0.0});
    }
    lr *= cfg.lr_decay;
  }
  result.teacher_hash_after = content_hash(state.teacher_parameters());
  if (result.teacher_hash_before != result.teacher_hash_after) {
    throw std::runtime_error("distill: teacher parameters changed during training");
  }
  result.student = state.student_encoder;
  result.student_heads = state.student_heads;
  return result;
}

DistillResult distill_graphs(const PretrainResult& teacher, const std::vector<Graph>& graphs,
                             const AugmentConfig& aug, const PretrainConfig& cfg,
                             const EncoderConfig& enc_cfg, std::mt19937_64& rng) {
  cfg.validate();
  if (graphs.empty()) throw std::invalid_argument("distill_graphs: empty corpus");
  std::vector<Graph> unlabeled;
  unlabeled.reserve(graphs.size());
  for (const Graph& g : graphs) unlabeled.push_back(g.without_labels());

  DistillState state = DistillState::init(teacher, enc_cfg, rng);
  DistillResult result;
  result.teacher_hash_before = content_hash(state.teacher_parameters());

  double lr = cfg.lr;
  int step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int s = 0; s < cfg.steps_per_epoch; ++s) {
      Tape tape;
      std::vector<Tensor> z_rows, h_rows;
      for (const Graph& g : unlabeled) {
        auto [teacher_view, student_view] = make_view_pair(g, aug, rng);
        EncodeResult stu = encode_view(tape, state.student_encoder, student_view);
        z_rows.push_back(project(tape, state.student_heads, readout(tape, stu.out),
                                 Branch::kOnline, state.head_nonlinearity));
        EncodeResult tea = encode_view(tape, state.teacher_encoder, teacher_view);
        h_rows.push_back(add_row(tape,
                                 matmul(tape, readout(tape, tea.out), state.teacher_head_W),
                                 state.teacher_head_b));
      }
      Tensor loss = distill_loss(tape, concat_rows(tape, z_rows), concat_rows(tape, h_rows));
      const double loss_value = loss.item();
      tape.backward(loss);
      std::vector<Tensor> params = state.student_parameters();
      adam_step(params, state.adam, lr);
      result.trajectory.push_back({step++, loss_value, 0.0});
    }
    lr *= cfg.lr_decay;
  }
  result.teacher_hash_after = content_hash(state.teacher_parameters());
  if (result.teacher_hash_before != result.teacher_hash_after) {
    throw std::runtime_error("distill_graphs: teacher parameters changed during training");
  }
  result.student = state.student_encoder;
  result.student_heads = state.student_heads;
  return result;
}

double distill_eval(const DistillState& state, const Graph& g, const AugmentConfig& aug,
                    int trials, std::mt19937_64& rng) {
  const Graph unlabeled = g.without_labels();
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto [teacher_view, student_view] = make_view_pair(unlabeled, aug, rng);
    const std::vector<int> common = common_kept_nodes(teacher_view, student_view);
    Tape tape;
    Tensor loss;
    total += pair_loss(tape, state, student_view, teacher_view, common, loss);
  }
  return total / static_cast<double>(trials);
}

}  // namespace cgfl
