#include "cgfl/pretrain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cgfl {

void PretrainConfig::validate() const {
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("PretrainConfig: tau outside [0, 1]");
  if (lr <= 0.0) throw std::invalid_argument("PretrainConfig: lr must be positive");
  if (lr_decay <= 0.0 || lr_decay > 1.0) {
    throw std::invalid_argument("PretrainConfig: lr_decay in (0, 1]");
  }
  if (epochs < 0 || steps_per_epoch < 0) {
    throw std::invalid_argument("PretrainConfig: negative schedule");
  }
}

ContrastiveState ContrastiveState::init(const EncoderConfig& cfg, std::mt19937_64& rng) {
  ContrastiveState s;
  s.online_encoder = EncoderParams::glorot(cfg, rng);
  s.heads = HeadParams::glorot(cfg, rng);
  s.head_nonlinearity = cfg.head_nonlinearity;
  // Target starts as a copy of the online branch.
  s.target_encoder = s.online_encoder.clone();
  s.target_encoder.set_requires_grad(false);
  s.heads.target_W = s.heads.online_W1.clone();
  s.heads.target_b = s.heads.online_b1.clone();
  s.heads.set_requires_grad_target(false);
  return s;
}

std::vector<Tensor> ContrastiveState::trainable_parameters() const {
  std::vector<Tensor> params = online_encoder.parameters();
  for (const Tensor& t : heads.online_parameters()) params.push_back(t);
  return params;
}

std::vector<Tensor> ContrastiveState::target_parameters() const {
  std::vector<Tensor> params = target_encoder.parameters();
  for (const Tensor& t : heads.target_parameters()) params.push_back(t);
  return params;
}

void ContrastiveState::ema_step(double tau) {
  std::vector<Tensor> target = target_encoder.parameters();
  target.push_back(heads.target_W);
  target.push_back(heads.target_b);
  std::vector<Tensor> online = online_encoder.parameters();
  online.push_back(heads.online_W1);
  online.push_back(heads.online_b1);
  ema_update(target, online, tau);
}

Tensor contrastive_loss(Tape& tape, const Tensor& z_online, const Tensor& h_target) {
  if (z_online.rows() != h_target.rows() || z_online.cols() != h_target.cols()) {
    throw std::invalid_argument("contrastive_loss: shape mismatch");
  }
  const auto n = static_cast<double>(z_online.rows());
  Tensor zn = l2norm_rows(tape, z_online);
  Tensor hn = l2norm_rows(tape, h_target);
  Tensor cos_sum = sum_all(tape, mul(tape, zn, hn));
  return affine(tape, cos_sum, -2.0 / n, 2.0);
}

namespace {

// Rows of a view's projection matching `common` original nodes, capped at
// batch_nodes via a shared subsample.
std::vector<std::size_t> view_rows(const AugmentedView& view, const std::vector<int>& common) {
  std::vector<std::size_t> rows;
  rows.reserve(common.size());
  for (int orig : common) rows.push_back(static_cast<std::size_t>(view.kept_nodes[orig]));
  return rows;
}

double directed_pair_loss(Tape& tape, ContrastiveState& state, const AugmentedView& online_view,
                          const AugmentedView& target_view, const std::vector<int>& common,
                          Tensor& loss_out) {
  EncodeResult online = encode_view(tape, state.online_encoder, online_view);
  Tensor z = project(tape, state.heads, online.out, Branch::kOnline, state.head_nonlinearity);
  EncodeResult target = encode_view(tape, state.target_encoder, target_view);
  Tensor h = project(tape, state.heads, target.out, Branch::kTarget);
  Tensor z_pairs = gather_rows(tape, z, view_rows(online_view, common));
  Tensor h_pairs = gather_rows(tape, h, view_rows(target_view, common));
  loss_out = contrastive_loss(tape, z_pairs, h_pairs);
  return loss_out.item();
}

}  // namespace

double pretrain_step(ContrastiveState& state, const Graph& g, const AugmentConfig& aug,
                     const PretrainConfig& cfg, double lr, std::mt19937_64& rng) {
  auto [view_a, view_b] = make_view_pair(g, aug, rng);
  std::vector<int> common = common_kept_nodes(view_a, view_b);
  if (common.size() > cfg.batch_nodes) {
    std::shuffle(common.begin(), common.end(), rng);
    common.resize(cfg.batch_nodes);
  }

  Tape tape;
  Tensor loss_ab, loss_ba;
  directed_pair_loss(tape, state, view_a, view_b, common, loss_ab);
  Tensor loss = loss_ab;
  if (cfg.symmetric_loss) {
    directed_pair_loss(tape, state, view_b, view_a, common, loss_ba);
    loss = scale(tape, add(tape, loss_ab, loss_ba), 0.5);
  }
  const double loss_value = loss.item();
  tape.backward(loss);

  std::vector<Tensor> params = state.trainable_parameters();
  adam_step(params, state.adam, lr);
  state.ema_step(cfg.tau);
  return loss_value;
}

double pretrain_step_graphs(ContrastiveState& state, const std::vector<Graph>& graphs,
                            const AugmentConfig& aug, const PretrainConfig& cfg, double lr,
                            std::mt19937_64& rng) {
  if (graphs.empty()) throw std::invalid_argument("pretrain_step_graphs: empty corpus");
  Tape tape;
  std::vector<Tensor> z_rows, h_rows, z_rows_rev, h_rows_rev;
  for (const Graph& g : graphs) {
    auto [view_a, view_b] = make_view_pair(g, aug, rng);
    EncodeResult oa = encode_view(tape, state.online_encoder, view_a);
    EncodeResult tb = encode_view(tape, state.target_encoder, view_b);
    z_rows.push_back(project(tape, state.heads, readout(tape, oa.out), Branch::kOnline,
                             state.head_nonlinearity));
    h_rows.push_back(project(tape, state.heads, readout(tape, tb.out), Branch::kTarget));
    if (cfg.symmetric_loss) {
      EncodeResult ob = encode_view(tape, state.online_encoder, view_b);
      EncodeResult ta = encode_view(tape, state.target_encoder, view_a);
      z_rows_rev.push_back(project(tape, state.heads, readout(tape, ob.out), Branch::kOnline,
                                   state.head_nonlinearity));
      h_rows_rev.push_back(project(tape, state.heads, readout(tape, ta.out), Branch::kTarget));
    }
  }
  Tensor loss = contrastive_loss(tape, concat_rows(tape, z_rows), concat_rows(tape, h_rows));
  if (cfg.symmetric_loss) {
    Tensor rev =
        contrastive_loss(tape, concat_rows(tape, z_rows_rev), concat_rows(tape, h_rows_rev));
    loss = scale(tape, add(tape, loss, rev), 0.5);
  }
  const double loss_value = loss.item();
  tape.backward(loss);
  std::vector<Tensor> params = state.trainable_parameters();
  adam_step(params, state.adam, lr);
  state.ema_step(cfg.tau);
  return loss_value;
}

double embedding_std(const EncoderParams& p, const Graph& g) {
  Tape tape;
  EncoderParams frozen = p.clone();
  frozen.set_requires_grad(false);
  EncodeResult r = encode_nodes(tape, frozen, propagation_matrix(g), g.features);
  Tensor zn = l2norm_rows(tape, r.out);
  const std::size_t n = zn.rows(), d = zn.cols();
  double total = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += zn(i, j);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (zn(i, j) - mean) * (zn(i, j) - mean);
    total += std::sqrt(var / static_cast<double>(n));
  }
  return total / static_cast<double>(d);
}

PretrainResult pretrain(const Graph& g_train, const std::optional<Graph>& g_test,
                        const AugmentConfig& aug, const PretrainConfig& cfg,
                        const EncoderConfig& enc_cfg, std::mt19937_64& rng) {
  cfg.validate();
  if (cfg.setting == Setting::kTransductive && !g_test.has_value()) {
    throw std::invalid_argument("pretrain: transductive setting requires test data");
  }
  const Graph train = g_train.without_labels();
  std::optional<Graph> test;
  if (g_test.has_value()) test = g_test->without_labels();

  ContrastiveState state = ContrastiveState::init(enc_cfg, rng);
  PretrainResult result;
  double lr = cfg.lr;
  int step = 0;
  std::uniform_int_distribution<int> which(0, 1);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int s = 0; s < cfg.steps_per_epoch; ++s) {
      const Graph& g = (cfg.setting == Setting::kTransductive && which(rng) == 1) ? *test : train;
      const double loss = pretrain_step(state, g, aug, cfg, lr, rng);
      StepStat stat;
      stat.step = step++;
      stat.loss = loss;
      stat.embed_std = cfg.track_embed_std ? embedding_std(state.online_encoder, train) : 0.0;
      result.trajectory.push_back(stat);
    }
    lr *= cfg.lr_decay;
    state.epoch = epoch + 1;
  }
  result.encoder = state.online_encoder;
  result.heads = state.heads;
  return result;
}

PretrainResult pretrain_graphs(const std::vector<Graph>& graphs, const AugmentConfig& aug,
                               const PretrainConfig& cfg, const EncoderConfig& enc_cfg,
                               std::mt19937_64& rng) {
  cfg.validate();
  std::vector<Graph> unlabeled;
  unlabeled.reserve(graphs.size());
  for (const Graph& g : graphs) unlabeled.push_back(g.without_labels());

  ContrastiveState state = ContrastiveState::init(enc_cfg, rng);
  PretrainResult result;
  double lr = cfg.lr;
  int step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int s = 0; s < cfg.steps_per_epoch; ++s) {
      const double loss = pretrain_step_graphs(state, unlabeled, aug, cfg, lr, rng);
      result.trajectory.push_back({step++, loss, 0.0});
    }
    lr *= cfg.lr_decay;
    state.epoch = epoch + 1;
  }
  result.encoder = state.online_encoder;
  result.heads = state.heads;
  return result;
}

}  // namespace cgfl
