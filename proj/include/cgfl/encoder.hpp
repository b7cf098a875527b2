#pragma once

#include <random>
#include <string>
#include <vector>

#include "cgfl/augment.hpp"
#include "cgfl/checkpoint.hpp"
#include "cgfl/graph.hpp"
#include "cgfl/tensor.hpp"

namespace cgfl {

struct EncoderConfig {
  std::size_t d_in = 0;
  std::size_t d_hidden = 64;
  std::size_t d_out = 64;
  std::size_t d_proj = 32;
  bool head_nonlinearity = true;  // ReLU between the two online head layers
};

/// Two-layer GCN plus a one-layer FC output. Glorot-uniform weights,
/// zero biases.
struct EncoderParams {
  Tensor W1, b1;    // d_in x d_h, 1 x d_h
  Tensor W2, b2;    // d_h x d_h, 1 x d_h
  Tensor Wfc, bfc;  // d_h x d_out, 1 x d_out

  static EncoderParams glorot(const EncoderConfig& cfg, std::mt19937_64& rng);

  std::vector<Tensor> parameters() const;
  EncoderParams clone() const;
  void set_requires_grad(bool value);
  NamedParams named(const std::string& prefix) const;
  static EncoderParams from_named(const NamedParams& named, const std::string& prefix);
};

enum class Branch { kOnline, kTarget };

/// Online head: two affine layers d_out -> d_proj -> d_proj; target head:
/// one affine layer d_out -> d_proj.
struct HeadParams {
  Tensor online_W1, online_b1;
  Tensor online_W2, online_b2;
  Tensor target_W, target_b;

  static HeadParams glorot(const EncoderConfig& cfg, std::mt19937_64& rng);

  std::vector<Tensor> online_parameters() const;
  std::vector<Tensor> target_parameters() const;
  HeadParams clone() const;
  void set_requires_grad_online(bool value);
  void set_requires_grad_target(bool value);
};

/// Hidden states of one forward pass; `gnn1`/`gnn2` are post-ReLU, `out`
/// is the FC output (no nonlinearity).
struct EncodeResult {
  Tensor gnn1;
  Tensor gnn2;
  Tensor out;
};

/// H = FC(ReLU(P * ReLU(P * X * W1 + b1) * W2 + b2)), with P the
/// propagation matrix. Passing P = identity turns the encoder into a
/// per-node MLP.
EncodeResult encode_nodes(Tape& tape, const EncoderParams& p, const Tensor& prop,
                          const Tensor& features);

EncodeResult encode_view(Tape& tape, const EncoderParams& p, const AugmentedView& view);

/// Mean-pooling readout over node rows: (n x d) -> (1 x d).
Tensor readout(Tape& tape, const Tensor& node_embeddings);

Tensor project(Tape& tape, const HeadParams& h, const Tensor& emb, Branch branch,
               bool head_nonlinearity = true);

}  // namespace cgfl
