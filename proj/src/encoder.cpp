#include "cgfl/encoder.hpp"

#include <cmath>
#include <stdexcept>

namespace cgfl {

namespace {

Tensor glorot_uniform(std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor w = Tensor::rand_uniform(fan_in, fan_out, rng, -limit, limit);
  w.set_requires_grad(true);
  return w;
}

Tensor zero_bias(std::size_t d) {
  Tensor b(1, d, true);
  return b;
}

}  // namespace

EncoderParams EncoderParams::glorot(const EncoderConfig& cfg, std::mt19937_64& rng) {
  if (cfg.d_in == 0) throw std::invalid_argument("EncoderConfig: d_in not set");
  EncoderParams p;
  p.W1 = glorot_uniform(cfg.d_in, cfg.d_hidden, rng);
  p.b1 = zero_bias(cfg.d_hidden);
  p.W2 = glorot_uniform(cfg.d_hidden, cfg.d_hidden, rng);
  p.b2 = zero_bias(cfg.d_hidden);
  p.Wfc = glorot_uniform(cfg.d_hidden, cfg.d_out, rng);
  p.bfc = zero_bias(cfg.d_out);
  return p;
}

std::vector<Tensor> EncoderParams::parameters() const { return {W1, b1, W2, b2, Wfc, bfc}; }

EncoderParams EncoderParams::clone() const {
  EncoderParams p;
  p.W1 = W1.clone();
  p.b1 = b1.clone();
  p.W2 = W2.clone();
  p.b2 = b2.clone();
  p.Wfc = Wfc.clone();
  p.bfc = bfc.clone();
  return p;
}

void EncoderParams::set_requires_grad(bool value) {
  for (Tensor t : parameters()) t.set_requires_grad(value);
}

NamedParams EncoderParams::named(const std::string& prefix) const {
  return {{prefix + ".W1", W1},  {prefix + ".b1", b1},  {prefix + ".W2", W2},
          {prefix + ".b2", b2},  {prefix + ".Wfc", Wfc}, {prefix + ".bfc", bfc}};
}

EncoderParams EncoderParams::from_named(const NamedParams& named, const std::string& prefix) {
  EncoderParams p;
  auto find = [&](const std::string& name) -> Tensor {
    for (const auto& [n, t] : named) {
      if (n == prefix + "." + name) {
        Tensor c = t.clone();
        c.set_requires_grad(true);
        return c;
      }
    }
    throw std::runtime_error("checkpoint: missing parameter " + prefix + "." + name);
  };
  p.W1 = find("W1");
  p.b1 = find("b1");
  p.W2 = find("W2");
  p.b2 = find("b2");
  p.Wfc = find("Wfc");
  p.bfc = find("bfc");
  if (p.W1.cols() != p.W2.rows() || p.W2.cols() != p.Wfc.rows()) {
    throw std::runtime_error("checkpoint: inconsistent encoder shapes under " + prefix);
  }
  return p;
}

HeadParams HeadParams::glorot(const EncoderConfig& cfg, std::mt19937_64& rng) {
  HeadParams h;
  h.online_W1 = glorot_uniform(cfg.d_out, cfg.d_proj, rng);
  h.online_b1 = zero_bias(cfg.d_proj);
  h.online_W2 = glorot_uniform(cfg.d_proj, cfg.d_proj, rng);
  h.online_b2 = zero_bias(cfg.d_proj);
  h.target_W = glorot_uniform(cfg.d_out, cfg.d_proj, rng);
  h.target_b = zero_bias(cfg.d_proj);
  return h;
}

std::vector<Tensor> HeadParams::online_parameters() const {
  return {online_W1, online_b1, online_W2, online_b2};
}

std::vector<Tensor> HeadParams::target_parameters() const { return {target_W, target_b}; }

HeadParams HeadParams::clone() const {
  HeadParams h;
  h.online_W1 = online_W1.clone();
  h.online_b1 = online_b1.clone();
  h.online_W2 = online_W2.clone();
  h.online_b2 = online_b2.clone();
  h.target_W = target_W.clone();
  h.target_b = target_b.clone();
  return h;
}

void HeadParams::set_requires_grad_online(bool value) {
  for (Tensor t : online_parameters()) t.set_requires_grad(value);
}

void HeadParams::set_requires_grad_target(bool value) {
  for (Tensor t : target_parameters()) t.set_requires_grad(value);
}

EncodeResult encode_nodes(Tape& tape, const EncoderParams& p, const Tensor& prop,
                          const Tensor& features) {
  if (features.cols() != p.W1.rows()) {
    throw std::invalid_argument("encode_nodes: feature_dim != d_in");
  }
  if (prop.rows() != features.rows() || prop.cols() != features.rows()) {
    throw std::invalid_argument("encode_nodes: propagation matrix shape");
  }
  EncodeResult r;
  Tensor xw = matmul(tape, features, p.W1);
  r.gnn1 = relu(tape, add_row(tape, matmul(tape, prop, xw), p.b1));
  Tensor hw = matmul(tape, r.gnn1, p.W2);
  r.gnn2 = relu(tape, add_row(tape, matmul(tape, prop, hw), p.b2));
  r.out = add_row(tape, matmul(tape, r.gnn2, p.Wfc), p.bfc);
  return r;
}

EncodeResult encode_view(Tape& tape, const EncoderParams& p, const AugmentedView& view) {
  return encode_nodes(tape, p, propagation_matrix(view.graph), view.graph.features);
}

Tensor readout(Tape& tape, const Tensor& node_embeddings) {
  if (node_embeddings.rows() == 0) throw std::runtime_error("readout: empty embedding matrix");
  return mean_rows(tape, node_embeddings);
}

Tensor project(Tape& tape, const HeadParams& h, const Tensor& emb, Branch branch,
               bool head_nonlinearity) {
  if (branch == Branch::kTarget) {
    return add_row(tape, matmul(tape, emb, h.target_W), h.target_b);
  }
  Tensor z = add_row(tape, matmul(tape, emb, h.online_W1), h.online_b1);
  if (head_nonlinearity) z = relu(tape, z);
  return add_row(tape, matmul(tape, z, h.online_W2), h.online_b2);
}

}  // namespace cgfl
