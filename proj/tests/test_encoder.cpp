#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cgfl/encoder.hpp"
#include "cgfl/graph.hpp"
#include "helpers.hpp"

using namespace cgfl;
using cgfl::testing::fd_max_rel_error;

namespace {

EncoderConfig small_cfg(std::size_t d_in) {
  EncoderConfig cfg;
  cfg.d_in = d_in;
  cfg.d_hidden = 5;
  cfg.d_out = 4;
  cfg.d_proj = 3;
  return cfg;
}

Graph permuted(const Graph& g, const std::vector<int>& perm) {
  // perm[old] = new index
  Graph out;
  out.num_nodes = g.num_nodes;
  out.features = Tensor(g.num_nodes, g.feature_dim());
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    for (std::size_t c = 0; c < g.feature_dim(); ++c) {
      out.features(static_cast<std::size_t>(perm[i]), c) = g.features(i, c);
    }
  }
  for (const auto& [a, b] : g.edges) add_edge(out, perm[a], perm[b]);
  return out;
}

}  // namespace

TEST_CASE("single-node graph: propagation is the identity") {
  std::mt19937_64 rng(1);
  EncoderConfig cfg = small_cfg(3);
  EncoderParams p = EncoderParams::glorot(cfg, rng);
  Graph g;
  g.num_nodes = 1;
  g.features = Tensor::from_rows({{0.4, -1.2, 2.0}});

  Tape tape;
  EncodeResult with_prop = encode_nodes(tape, p, propagation_matrix(g), g.features);
  EncodeResult with_identity = encode_nodes(tape, p, Tensor::identity(1), g.features);
  for (std::size_t c = 0; c < with_prop.out.cols(); ++c) {
    CHECK(with_prop.out(0, c) == doctest::Approx(with_identity.out(0, c)).epsilon(1e-14));
  }
}

TEST_CASE("zero weights give exactly zero output") {
  EncoderConfig cfg = small_cfg(3);
  EncoderParams p;
  p.W1 = Tensor::zeros(3, 5);
  p.b1 = Tensor::zeros(1, 5);
  p.W2 = Tensor::zeros(5, 5);
  p.b2 = Tensor::zeros(1, 5);
  p.Wfc = Tensor::zeros(5, 4);
  p.bfc = Tensor::zeros(1, 4);
  Graph g = synth_sbm(2, 3, 1.0, 0.0, 3, 2);
  Tape tape;
  EncodeResult r = encode_nodes(tape, p, propagation_matrix(g), g.features);
  for (double v : r.out.data()) CHECK(v == 0.0);
}

TEST_CASE("encoder gradient w.r.t. all params matches finite differences") {
  std::mt19937_64 rng(5);
  EncoderConfig cfg = small_cfg(4);
  EncoderParams p = EncoderParams::glorot(cfg, rng);
  Graph g = synth_sbm(1, 5, 0.6, 0.0, 4, 3);
  Tensor prop = propagation_matrix(g);
  std::vector<Tensor> params = p.parameters();
  const double err = fd_max_rel_error(params, [&](Tape& t) {
    return sum_all(t, encode_nodes(t, p, prop, g.features).out);
  });
  CHECK(err <= 1e-4);
}

TEST_CASE("encode_nodes is equivariant to node relabeling") {
  std::mt19937_64 rng(9);
  EncoderConfig cfg = small_cfg(4);
  EncoderParams p = EncoderParams::glorot(cfg, rng);
  Graph g = synth_sbm(2, 4, 0.8, 0.2, 4, 8);
  std::vector<int> perm(g.num_nodes);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Graph h = permuted(g, perm);

  Tape tape;
  Tensor out_g = encode_nodes(tape, p, propagation_matrix(g), g.features).out;
  Tensor out_h = encode_nodes(tape, p, propagation_matrix(h), h.features).out;
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    for (std::size_t c = 0; c < out_g.cols(); ++c) {
      CHECK(out_g(i, c) ==
            doctest::Approx(out_h(static_cast<std::size_t>(perm[i]), c)).epsilon(1e-10));
    }
  }
  // readout of the same embeddings is permutation invariant
  Tensor r_g = readout(tape, out_g);
  Tensor r_h = readout(tape, out_h);
  for (std::size_t c = 0; c < r_g.cols(); ++c) {
    CHECK(r_g(0, c) == doctest::Approx(r_h(0, c)).epsilon(1e-10));
  }
}

TEST_CASE("identity propagation reduces the encoder to a per-node MLP") {
  std::mt19937_64 rng(13);
  EncoderConfig cfg = small_cfg(4);
  EncoderParams p = EncoderParams::glorot(cfg, rng);
  Graph g = synth_sbm(2, 4, 0.9, 0.1, 4, 5);
  Tape tape;
  Tensor batch = encode_nodes(tape, p, Tensor::identity(g.num_nodes), g.features).out;
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    Tensor row = Tensor(1, g.feature_dim());
    for (std::size_t c = 0; c < g.feature_dim(); ++c) row(0, c) = g.features(i, c);
    Tensor single = encode_nodes(tape, p, Tensor::identity(1), row).out;
    for (std::size_t c = 0; c < batch.cols(); ++c) {
      CHECK(batch(i, c) == doctest::Approx(single(0, c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("readout examples") {
  Tape tape;
  Tensor same = Tensor::from_rows({{2, -1}, {2, -1}, {2, -1}});
  Tensor r = readout(tape, same);
  CHECK(r(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r(0, 1) == doctest::Approx(-1.0).epsilon(1e-15));

  Tensor two = Tensor::from_rows({{1, 0}, {0, 1}});
  Tensor r2 = readout(tape, two);
  CHECK(r2(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r2(0, 1) == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS(readout(tape, Tensor(0, 3)));
}

TEST_CASE("project: identity target head passes the embedding through") {
  HeadParams h;
  h.online_W1 = Tensor::identity(3);
  h.online_b1 = Tensor::zeros(1, 3);
  h.online_W2 = Tensor::identity(3);
  h.online_b2 = Tensor::zeros(1, 3);
  h.target_W = Tensor::identity(3);
  h.target_b = Tensor::zeros(1, 3);
  Tensor emb = Tensor::from_rows({{0.5, -2, 1}});
  Tape tape;
  Tensor t = project(tape, h, emb, Branch::kTarget);
  for (std::size_t c = 0; c < 3; ++c) CHECK(t(0, c) == emb(0, c));
}

TEST_CASE("project: online and target branches differ under random init") {
  std::mt19937_64 rng(3);
  EncoderConfig cfg = small_cfg(2);
  HeadParams h = HeadParams::glorot(cfg, rng);
  Tensor emb = Tensor::from_rows({{1, 2, 3, 4}});
  Tape tape;
  Tensor online = project(tape, h, emb, Branch::kOnline);
  Tensor target = project(tape, h, emb, Branch::kTarget);
  CHECK(online.rows() == 1);
  CHECK(online.cols() == cfg.d_proj);
  CHECK(target.cols() == cfg.d_proj);
  bool any_diff = false;
  for (std::size_t c = 0; c < online.cols(); ++c) {
    if (std::fabs(online(0, c) - target(0, c)) > 1e-9) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("encoder params round-trip through named form") {
  std::mt19937_64 rng(17);
  EncoderConfig cfg = small_cfg(6);
  EncoderParams p = EncoderParams::glorot(cfg, rng);
  EncoderParams q = EncoderParams::from_named(p.named("enc"), "enc");
  CHECK(content_hash(p.parameters()) == content_hash(q.parameters()));
}

TEST_CASE("glorot init is seeded and biases are zero") {
  EncoderConfig cfg = small_cfg(6);
  std::mt19937_64 r1(4), r2(4), r3(5);
  EncoderParams a = EncoderParams::glorot(cfg, r1);
  EncoderParams b = EncoderParams::glorot(cfg, r2);
  EncoderParams c = EncoderParams::glorot(cfg, r3);
  CHECK(content_hash(a.parameters()) == content_hash(b.parameters()));
  CHECK(content_hash(a.parameters()) != content_hash(c.parameters()));
  for (double v : a.b1.data()) CHECK(v == 0.0);
  for (double v : a.bfc.data()) CHECK(v == 0.0);
}
