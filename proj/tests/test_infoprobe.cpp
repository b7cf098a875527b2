#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cgfl/encoder.hpp"
#include "cgfl/graph.hpp"
#include "cgfl/infoprobe.hpp"
#include "helpers.hpp"

using namespace cgfl;

namespace {

Graph probe_graph(std::size_t n, std::size_t d, std::uint64_t seed, bool positive = false) {
  Graph g;
  g.num_nodes = static_cast<int>(n);
  std::mt19937_64 rng(seed);
  g.features = Tensor::randn(n, d, rng);
  if (positive) {
    for (std::size_t k = 0; k < g.features.size(); ++k) {
      g.features.data()[k] = std::fabs(g.features.data()[k]) + 0.5;
    }
  }
  for (int i = 0; i + 1 < static_cast<int>(n); ++i) add_edge(g, i, i + 1);
  g.node_labels.assign(n, 0);
  return g;
}

EncoderParams zero_encoder(std::size_t d_in, std::size_t d_h, std::size_t d_out) {
  std::mt19937_64 rng(1);
  EncoderConfig cfg;
  cfg.d_in = d_in;
  cfg.d_hidden = d_h;
  cfg.d_out = d_out;
  cfg.d_proj = 2;
  EncoderParams p = EncoderParams::glorot(cfg, rng);
  for (Tensor t : p.parameters()) {
    for (std::size_t k = 0; k < t.size(); ++k) t.data()[k] = 0.0;
  }
  return p;
}

// Copies the input through every layer: each weight matrix holds an identity
// block, biases stay zero. Meaningful on positive features (ReLU passthrough).
EncoderParams identity_encoder(std::size_t d_in, std::size_t d_h, std::size_t d_out) {
  EncoderParams p = zero_encoder(d_in, d_h, d_out);
  for (std::size_t i = 0; i < std::min(d_in, d_h); ++i) p.W1(i, i) = 1.0;
  for (std::size_t i = 0; i < d_h; ++i) p.W2(i, i) = 1.0;
  for (std::size_t i = 0; i < std::min(d_h, d_out); ++i) p.Wfc(i, i) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("gaussian entropy constant and closed-form discarded information") {
  CHECK(std::fabs(gaussian_entropy_constant() - 1.41894) <= 1e-5);
  // sigma = 1, d = 1: H is exactly the entropy constant
  CHECK(discarded_information({1.0}, 1) ==
        doctest::Approx(gaussian_entropy_constant()).epsilon(1e-12));
  // additive over nodes, scaled by feature dimension
  const double h = discarded_information({0.5, 2.0}, 3);
  const double expect = 3.0 * (std::log(0.5) + gaussian_entropy_constant()) +
                        3.0 * (std::log(2.0) + gaussian_entropy_constant());
  CHECK(h == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("discarded information is monotone in every sigma") {
  std::vector<double> sigma = {0.3, 1.2, 0.8};
  const double base = discarded_information(sigma, 4);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    std::vector<double> bumped = sigma;
    bumped[i] += 0.1;
    CHECK(discarded_information(bumped, 4) > base);
  }
}

TEST_CASE("sigma field stays positive and respects the cap") {
  SigmaField f = SigmaField::init(4, 0.1);
  for (std::size_t i = 0; i < 4; ++i) f.rho(i, 0) = -30.0 + 20.0 * static_cast<double>(i);
  const std::vector<double> s = f.sigma(10.0);
  for (double v : s) {
    CHECK(v > 0.0);
    CHECK(v <= 10.0);
  }
  CHECK(s[3] == 10.0);
}

TEST_CASE("probe config validation") {
  ProbeConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  SUBCASE("entropy weight") {
    cfg.entropy_weight = 0.0;
    CHECK_THROWS(cfg.validate());
  }
  SUBCASE("mc samples") {
    cfg.mc_samples = 0;
    CHECK_THROWS(cfg.validate());
  }
  SUBCASE("sigma init above cap") {
    cfg.sigma_init = 20.0;
    CHECK_THROWS(cfg.validate());
  }
}

TEST_CASE("probe layer rejects dimension mismatch") {
  Graph g = probe_graph(4, 3, 2);
  EncoderParams p = zero_encoder(5, 4, 3);
  ProbeConfig cfg;
  cfg.steps = 1;
  std::mt19937_64 rng(3);
  CHECK_THROWS(probe_layer(p, g, ProbeLayer::kGnn1, cfg, rng));
}

TEST_CASE("zero encoder drives every sigma to the cap") {
  Graph g = probe_graph(5, 3, 7);
  EncoderParams p = zero_encoder(3, 4, 3);
  ProbeConfig cfg;
  cfg.steps = 400;
  cfg.lr = 0.05;
  cfg.mc_samples = 1;  // reconstruction is identically zero for the zero map
  std::mt19937_64 rng(11);
  ProbeEntry entry = probe_layer(p, g, ProbeLayer::kGnn2, cfg, rng);
  for (double s : entry.sigma) CHECK(s == cfg.sigma_cap);
  CHECK(entry.reconstruction == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("vanishing entropy weight keeps sigma at or below its init") {
  Graph g = probe_graph(5, 3, 13, /*positive=*/true);
  EncoderParams p = identity_encoder(3, 4, 3);
  ProbeConfig cfg;
  cfg.steps = 150;
  cfg.entropy_weight = 1e-8;
  std::mt19937_64 rng(17);
  ProbeEntry entry = probe_layer(p, g, ProbeLayer::kGnn1, cfg, rng);
  for (double s : entry.sigma) CHECK(s <= cfg.sigma_init + 1e-9);
}

TEST_CASE("reported H is recomputable from the sigma vector") {
  Graph g = probe_graph(4, 3, 19);
  EncoderParams p = identity_encoder(3, 4, 3);
  ProbeConfig cfg;
  cfg.steps = 50;
  std::mt19937_64 rng(23);
  ProbeEntry entry = probe_layer(p, g, ProbeLayer::kFc, cfg, rng);
  CHECK(std::fabs(entry.discarded_info - discarded_information(entry.sigma, 3)) <= 1e-12);
}

TEST_CASE("full-model report covers the three layers in order and is deterministic") {
  Graph g = probe_graph(5, 3, 29, /*positive=*/true);
  EncoderParams p = identity_encoder(3, 4, 3);
  ProbeConfig cfg;
  cfg.steps = 60;
  cfg.mc_samples = 2;
  std::mt19937_64 r1(31), r2(31);
  InfoProbeReport a = probe_model(p, g, cfg, r1);
  InfoProbeReport b = probe_model(p, g, cfg, r2);
  REQUIRE(a.entries.size() == 3);
  CHECK(a.entries[0].layer == "GNN-1");
  CHECK(a.entries[1].layer == "GNN-2");
  CHECK(a.entries[2].layer == "FC");
  CHECK(a.entropy_weight == cfg.entropy_weight);
  CHECK(a.steps == cfg.steps);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::fabs(a.entries[i].discarded_info - b.entries[i].discarded_info) <= 1e-9);
  }
}

TEST_CASE("zero encoder discards strictly more information than a copying one") {
  Graph g = probe_graph(6, 3, 37, /*positive=*/true);
  ProbeConfig cfg;
  cfg.steps = 250;
  cfg.lr = 0.05;
  cfg.mc_samples = 2;
  std::mt19937_64 r1(41), r2(43);
  InfoProbeReport zero = probe_model(zero_encoder(3, 4, 3), g, cfg, r1);
  InfoProbeReport ident = probe_model(identity_encoder(3, 4, 3), g, cfg, r2);
  const std::vector<LayerDelta> deltas = compare_reports(zero, ident);
  REQUIRE(deltas.size() == 3);
  for (const LayerDelta& d : deltas) {
    CHECK(d.delta > 0.0);
    CHECK(d.delta == doctest::Approx(d.h_a - d.h_b).epsilon(1e-12));
  }
}

TEST_CASE("comparing a report against itself gives all-zero deltas") {
  Graph g = probe_graph(4, 3, 47);
  ProbeConfig cfg;
  cfg.steps = 30;
  std::mt19937_64 rng(53);
  InfoProbeReport a = probe_model(identity_encoder(3, 4, 3), g, cfg, rng);
  for (const LayerDelta& d : compare_reports(a, a)) CHECK(d.delta == 0.0);
}

TEST_CASE("compare_reports rejects mismatched layers") {
  InfoProbeReport a, b;
  a.entries.push_back({"GNN-1", 1.0, 0.0, {}});
  SUBCASE("row count") { CHECK_THROWS(compare_reports(a, b)); }
  SUBCASE("layer name") {
    b.entries.push_back({"FC", 1.0, 0.0, {}});
    CHECK_THROWS(compare_reports(a, b));
  }
}

TEST_CASE("reparameterized gradient of the reconstruction term matches finite differences") {
  // 3-node graph, fixed noise draws shared by every (re-)evaluation so the
  // Monte-Carlo objective is a deterministic function of rho
  Graph g = probe_graph(3, 2, 59);
  EncoderParams enc = identity_encoder(2, 3, 2);
  enc.set_requires_grad(false);
  const Tensor prop = propagation_matrix(g);
  const int mc = 256;
  std::mt19937_64 noise_rng(61);
  std::vector<Tensor> draws;
  for (int s = 0; s < mc; ++s) draws.push_back(Tensor::randn(3, 2, noise_rng));

  Tensor z;
  {
    Tape tape;
    Tensor h1 = relu(tape, add_row(tape, matmul(tape, prop, matmul(tape, g.features, enc.W1)),
                                   enc.b1));
    z = relu(tape, add_row(tape, matmul(tape, prop, matmul(tape, h1, enc.W2)), enc.b2));
  }

  SigmaField field = SigmaField::init(3, 0.3);
  std::mt19937_64 jitter(67);
  std::normal_distribution<double> n01(0.0, 0.2);
  for (std::size_t i = 0; i < 3; ++i) field.rho(i, 0) += n01(jitter);

  auto forward = [&](Tape& tape) {
    Tensor sigma = clamp_max(tape, exp_op(tape, field.rho), 10.0);
    Tensor recon_sum;
    for (int s = 0; s < mc; ++s) {
      Tensor noisy = add(tape, g.features, row_scale(tape, draws[static_cast<std::size_t>(s)],
                                                     sigma));
      Tensor h1 = relu(tape, add_row(tape, matmul(tape, prop, matmul(tape, noisy, enc.W1)),
                                     enc.b1));
      Tensor out = relu(tape, add_row(tape, matmul(tape, prop, matmul(tape, h1, enc.W2)),
                                      enc.b2));
      Tensor diff = sub(tape, out, z);
      Tensor sq = sum_all(tape, mul(tape, diff, diff));
      recon_sum = recon_sum.defined() ? add(tape, recon_sum, sq) : sq;
    }
    return scale(tape, recon_sum, 1.0 / mc);
  };

  std::vector<Tensor> probe_params = {field.rho};
  const double err = cgfl::testing::fd_max_rel_error(probe_params, forward, 1e-5, 1e-4);
  CHECK(err <= 1e-3);
}
