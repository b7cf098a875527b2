#include "cgfl/infoprobe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cgfl {

std::string probe_layer_name(ProbeLayer layer) {
  switch (layer) {
    case ProbeLayer::kGnn1:
      return "GNN-1";
    case ProbeLayer::kGnn2:
      return "GNN-2";
    case ProbeLayer::kFc:
      return "FC";
  }
  throw std::invalid_argument("probe_layer_name: unknown layer");
}

void ProbeConfig::validate() const {
  if (entropy_weight <= 0.0) throw std::invalid_argument("ProbeConfig: entropy_weight > 0");
  if (mc_samples < 1) throw std::invalid_argument("ProbeConfig: mc_samples >= 1");
  if (sigma_init <= 0.0 || sigma_init > sigma_cap) {
    throw std::invalid_argument("ProbeConfig: need 0 < sigma_init <= sigma_cap");
  }
}

SigmaField SigmaField::init(std::size_t num_nodes, double sigma_init) {
  SigmaField f;
  f.rho = Tensor::full(num_nodes, 1, std::log(sigma_init));
  f.rho.set_requires_grad(true);
  return f;
}

std::vector<double> SigmaField::sigma(double sigma_cap) const {
  std::vector<double> out(rho.rows());
  for (std::size_t i = 0; i < rho.rows(); ++i) {
    out[i] = std::min(std::exp(rho(i, 0)), sigma_cap);
  }
  return out;
}

double gaussian_entropy_constant() { return 0.5 * std::log(2.0 * M_PI * M_E); }

double discarded_information(const std::vector<double>& sigma, std::size_t feature_dim) {
  const double c = gaussian_entropy_constant();
  double h = 0.0;
  for (double s : sigma) h += static_cast<double>(feature_dim) * (std::log(s) + c);
  return h;
}

namespace {

Tensor layer_forward(Tape& tape, const EncoderParams& p, const Tensor& prop, const Tensor& x,
                     ProbeLayer layer) {
  Tensor h1 = relu(tape, add_row(tape, matmul(tape, prop, matmul(tape, x, p.W1)), p.b1));
  if (layer == ProbeLayer::kGnn1) return h1;
  Tensor h2 = relu(tape, add_row(tape, matmul(tape, prop, matmul(tape, h1, p.W2)), p.b2));
  if (layer == ProbeLayer::kGnn2) return h2;
  return add_row(tape, matmul(tape, h2, p.Wfc), p.bfc);
}

}  // namespace

ProbeEntry probe_layer(const EncoderParams& encoder, const Graph& g, ProbeLayer layer,
                       const ProbeConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  if (g.feature_dim() != encoder.W1.rows()) {
    throw std::invalid_argument("probe_layer: encoder/graph dimension mismatch");
  }
  const std::size_t n = g.num_nodes;
  const std::size_t d = g.feature_dim();

  EncoderParams frozen = encoder.clone();
  frozen.set_requires_grad(false);
  const Tensor prop = propagation_matrix(g);

  // Clean hidden state: the fixed regression target z.
  Tensor z;
  {
    Tape tape;
    z = layer_forward(tape, frozen, prop, g.features, layer);
  }

  SigmaField field = SigmaField::init(n, cfg.sigma_init);
  std::vector<Tensor> params = {field.rho};
  AdamState adam;
  double final_recon = 0.0;

  for (int step = 0; step < cfg.steps; ++step) {
    Tape tape;
    Tensor sigma = clamp_max(tape, exp_op(tape, field.rho), cfg.sigma_cap);
    Tensor recon_sum;
    for (int s = 0; s < cfg.mc_samples; ++s) {
      Tensor u = Tensor::randn(n, d, rng);
      Tensor noisy = add(tape, g.features, row_scale(tape, u, sigma));
      Tensor out = layer_forward(tape, frozen, prop, noisy, layer);
      Tensor diff = sub(tape, out, z);
      Tensor sq = sum_all(tape, mul(tape, diff, diff));
      recon_sum = recon_sum.defined() ? add(tape, recon_sum, sq) : sq;
    }
    Tensor recon = scale(tape, recon_sum, 1.0 / cfg.mc_samples);
    // H(G|Z) = d * (sum_i log sigma_i) + n * d * C.
    Tensor entropy = affine(tape, sum_all(tape, log_op(tape, sigma)), static_cast<double>(d),
                            static_cast<double>(n) * static_cast<double>(d) *
                                gaussian_entropy_constant());
    Tensor loss = add(tape, recon, scale(tape, entropy, -cfg.entropy_weight));
    final_recon = recon.item();
    tape.backward(loss);
    adam_step(params, adam, cfg.lr);
  }

  ProbeEntry entry;
  entry.layer = probe_layer_name(layer);
  entry.sigma = field.sigma(cfg.sigma_cap);
  entry.discarded_info = discarded_information(entry.sigma, d);
  entry.reconstruction = final_recon;
  return entry;
}

InfoProbeReport probe_model(const EncoderParams& encoder, const Graph& g, const ProbeConfig& cfg,
                            std::mt19937_64& rng) {
  InfoProbeReport report;
  report.entropy_weight = cfg.entropy_weight;
  report.steps = cfg.steps;
  for (ProbeLayer layer : {ProbeLayer::kGnn1, ProbeLayer::kGnn2, ProbeLayer::kFc}) {
    report.entries.push_back(probe_layer(encoder, g, layer, cfg, rng));
  }
  return report;
}

std::vector<LayerDelta> compare_reports(const InfoProbeReport& a, const InfoProbeReport& b) {
  if (a.entries.size() != b.entries.size()) {
    throw std::invalid_argument("compare_reports: layer count mismatch");
  }
  std::vector<LayerDelta> deltas;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (a.entries[i].layer != b.entries[i].layer) {
      throw std::invalid_argument("compare_reports: layer name mismatch at row " +
                                  std::to_string(i));
    }
    LayerDelta d;
    d.layer = a.entries[i].layer;
    d.h_a = a.entries[i].discarded_info;
    d.h_b = b.entries[i].discarded_info;
    d.delta = d.h_a - d.h_b;
    deltas.push_back(d);
  }
  return deltas;
}

}  // namespace cgfl
