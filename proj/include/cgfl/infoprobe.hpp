#pragma once

#include <random>
#include <string>
#include <vector>

#include "cgfl/encoder.hpp"
#include "cgfl/graph.hpp"
#include "cgfl/tensor.hpp"

namespace cgfl {

enum class ProbeLayer { kGnn1, kGnn2, kFc };

std::string probe_layer_name(ProbeLayer layer);

struct ProbeConfig {
  double entropy_weight = 0.1;
  int mc_samples = 8;
  int steps = 500;
  double lr = 0.01;
  double sigma_init = 0.1;
  double sigma_cap = 10.0;

  void validate() const;
};

/// Per-node positive noise scales, parameterized as sigma_i = exp(rho_i)
/// and clamped at sigma_cap.
struct SigmaField {
  Tensor rho;  // n x 1, unconstrained

  static SigmaField init(std::size_t num_nodes, double sigma_init);
  std::vector<double> sigma(double sigma_cap) const;
};

struct ProbeEntry {
  std::string layer;
  double discarded_info = 0.0;  // H(G|Z), nats
  double reconstruction = 0.0;  // final MC reconstruction term
  std::vector<double> sigma;
};

struct InfoProbeReport {
  std::vector<ProbeEntry> entries;
  double entropy_weight = 0.0;
  int steps = 0;
};

/// Gaussian entropy constant: 0.5 * log(2 pi e).
double gaussian_entropy_constant();

/// H(G|Z) = sum_i d * (log sigma_i + 0.5 log 2 pi e).
double discarded_information(const std::vector<double>& sigma, std::size_t feature_dim);

/// Learns per-node noise scales for one hidden layer: minimizes the MC
/// reconstruction error of the layer output under input noise minus
/// entropy_weight times the Gaussian entropy, via Adam on rho.
ProbeEntry probe_layer(const EncoderParams& encoder, const Graph& g, ProbeLayer layer,
                       const ProbeConfig& cfg, std::mt19937_64& rng);

/// All three layers (GNN-1, GNN-2, FC).
InfoProbeReport probe_model(const EncoderParams& encoder, const Graph& g, const ProbeConfig& cfg,
                            std::mt19937_64& rng);

struct LayerDelta {
  std::string layer;
  double h_a = 0.0;
  double h_b = 0.0;
  double delta = 0.0;  // h_a - h_b
};

/// Per-layer H(G|Z) differences; both reports must cover the same layers in
/// the same order.
std::vector<LayerDelta> compare_reports(const InfoProbeReport& a, const InfoProbeReport& b);

}  // namespace cgfl
