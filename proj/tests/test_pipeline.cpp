#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "cgfl/checkpoint.hpp"
#include "cgfl/pipeline.hpp"

using namespace cgfl;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("cgfl_pipeline_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

// small, fast synthetic configuration used by the end-to-end tests
RunConfig quick_config(Mode mode = Mode::kCgfl) {
  RunConfig cfg;
  cfg.mode = mode;
  cfg.dataset.sbm_blocks = 4;
  cfg.dataset.sbm_nodes_per_block = 10;
  cfg.dataset.sbm_feature_dim = 8;
  cfg.d_hidden = 8;
  cfg.d_out = 8;
  cfg.d_proj = 4;
  cfg.pretrain.epochs = 2;
  cfg.pretrain.steps_per_epoch = 3;
  cfg.meta.meta_epochs = 1;
  cfg.meta.outer_steps_per_epoch = 2;
  cfg.episode.k_shot = 2;
  cfg.episode.query_per_class = 3;
  cfg.test_episodes = 10;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("mode, setting, task, and sweep-axis parsing") {
  CHECK(parse_mode("cgfl") == Mode::kCgfl);
  CHECK(parse_mode("teacher") == Mode::kTeacherOnly);
  CHECK(parse_mode("no-pretrain") == Mode::kNoPretrain);
  CHECK_THROWS(parse_mode("bogus"));
  CHECK(parse_setting("inductive") == Setting::kInductive);
  CHECK(parse_setting("transductive") == Setting::kTransductive);
  CHECK_THROWS(parse_setting(""));
  CHECK(parse_task("node") == TaskKind::kNodeTask);
  CHECK(parse_task("graph") == TaskKind::kGraphTask);
  CHECK_THROWS(parse_task("edge"));
  CHECK(parse_sweep_axis("k_shot") == SweepAxis::kKShot);
  CHECK(parse_sweep_axis("label_rate") == SweepAxis::kLabelRate);
  CHECK(parse_sweep_axis("aug_set") == SweepAxis::kAugSet);
  CHECK_THROWS(parse_sweep_axis("lr"));
}

TEST_CASE("augmentation set strings toggle exactly the named kinds") {
  AugmentConfig cfg;
  apply_aug_set(cfg, "ND");
  CHECK(cfg.node_drop_enabled);
  CHECK_FALSE(cfg.edge_remove_enabled);
  CHECK_FALSE(cfg.feature_mask_enabled);
  apply_aug_set(cfg, "ER+FM");
  CHECK_FALSE(cfg.node_drop_enabled);
  CHECK(cfg.edge_remove_enabled);
  CHECK(cfg.feature_mask_enabled);
  apply_aug_set(cfg, "ND+ER+FM");
  CHECK(cfg.node_drop_enabled);
  CHECK(cfg.edge_remove_enabled);
  CHECK(cfg.feature_mask_enabled);
  CHECK_THROWS(apply_aug_set(cfg, "ND+XX"));
}

TEST_CASE("run config validation") {
  RunConfig cfg = quick_config();
  CHECK_NOTHROW(cfg.validate());
  SUBCASE("label rate bounds") {
    cfg.label_rate = 0.0;
    CHECK_THROWS(cfg.validate());
  }
  SUBCASE("episode geometry") {
    cfg.episode.k_shot = 0;
    CHECK_THROWS(cfg.validate());
  }
  SUBCASE("test episodes") {
    cfg.test_episodes = 0;
    CHECK_THROWS(cfg.validate());
  }
  SUBCASE("citation graph task") {
    cfg.dataset.node_file = "x.nodes";
    cfg.dataset.edge_file = "x.edges";
    cfg.task = TaskKind::kGraphTask;
    CHECK_THROWS(cfg.validate());
  }
}

TEST_CASE("config hash is stable and sensitive to every changed field") {
  RunConfig a = quick_config();
  RunConfig b = quick_config();
  CHECK(config_hash(a) == config_hash(b));
  SUBCASE("seed") { b.seed = 6; }
  SUBCASE("mode") { b.mode = Mode::kTeacherOnly; }
  SUBCASE("label rate") { b.label_rate = 0.5; }
  SUBCASE("k shot") { b.episode.k_shot = 3; }
  SUBCASE("augmentation rate") { b.aug.node_drop_rate = 0.2; }
  SUBCASE("inner lr") { b.meta.inner_lr = 0.02; }
  SUBCASE("dataset size") { b.dataset.sbm_nodes_per_block = 11; }
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("stage seeds are deterministic and distinct across stages") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    CHECK(stage_seed(42, s) == stage_seed(42, s));
    for (std::uint64_t t = s + 1; t < 8; ++t) CHECK(stage_seed(42, s) != stage_seed(42, t));
  }
  CHECK(stage_seed(1, 0) != stage_seed(2, 0));
}

TEST_CASE("teacher mode runs pretrain, meta-train, meta-test and skips distill") {
  RunConfig cfg = quick_config(Mode::kTeacherOnly);
  PipelineResult res = run_pipeline(cfg);
  const std::vector<std::string> expected = {"pretrain", "meta_train", "meta_test"};
  CHECK(res.stages_run == expected);
}

TEST_CASE("no-pretrain mode skips both pretrain and distill") {
  RunConfig cfg = quick_config(Mode::kNoPretrain);
  PipelineResult res = run_pipeline(cfg);
  const std::vector<std::string> expected = {"meta_train", "meta_test"};
  CHECK(res.stages_run == expected);
}

TEST_CASE("full mode runs all four stages, probe adds a fifth") {
  RunConfig cfg = quick_config();
  cfg.run_probe = true;
  cfg.probe.steps = 5;
  cfg.probe.mc_samples = 1;
  PipelineResult res = run_pipeline(cfg);
  const std::vector<std::string> expected = {"pretrain", "distill", "meta_train", "meta_test",
                                             "probe"};
  CHECK(res.stages_run == expected);
}

TEST_CASE("identical configs give identical final results") {
  RunConfig cfg = quick_config();
  PipelineResult a = run_pipeline(cfg);
  PipelineResult b = run_pipeline(cfg);
  CHECK(a.test_mean == b.test_mean);
  CHECK(a.test_std == b.test_std);
  CHECK(a.test_mean >= 0.0);
  CHECK(a.test_mean <= 1.0);
}

TEST_CASE("every metrics row carries the run's config hash") {
  RunConfig cfg = quick_config(Mode::kTeacherOnly);
  const std::uint64_t h = config_hash(cfg);
  PipelineResult res = run_pipeline(cfg);
  CHECK_FALSE(res.metrics.empty());
  for (const MetricsRecord& m : res.metrics) CHECK(m.config_hash == h);
}

TEST_CASE("a low label rate shrinks episodes instead of crashing") {
  RunConfig cfg = quick_config(Mode::kNoPretrain);
  cfg.label_rate = 0.1;  // one labeled node per block at 10 nodes/block is too
                         // small, so the fixture uses 4x25 here
  cfg.dataset.sbm_nodes_per_block = 25;
  cfg.episode.k_shot = 3;
  cfg.episode.query_per_class = 10;
  PipelineResult res = run_pipeline(cfg);
  CHECK(res.test_mean >= 0.0);
  bool clamped = false;
  for (const MetricsRecord& m : res.metrics) {
    if (m.metric == "k_shot_effective") {
      clamped = true;
      CHECK(m.value <= 3.0);
    }
  }
  CHECK(clamped);
}

TEST_CASE("output directory receives config, metrics, checkpoints, and curves") {
  TempDir tmp;
  RunConfig cfg = quick_config();
  cfg.output_dir = tmp.path.string();
  run_pipeline(cfg);
  CHECK(fs::exists(tmp.path / "config.txt"));
  CHECK(fs::exists(tmp.path / "metrics.csv"));
  CHECK(fs::exists(tmp.path / "pretrain.ckpt"));
  CHECK(fs::exists(tmp.path / "student.ckpt"));
  CHECK(fs::exists(tmp.path / "meta.ckpt"));
  CHECK(fs::exists(tmp.path / "meta_curve.csv"));
  CHECK(fs::exists(tmp.path / "meta_test.csv"));

  // config.txt round-trips the canonical key=value serialization
  std::ifstream in(tmp.path / "config.txt");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      CHECK(line.find('=') != std::string::npos);
      ++lines;
    }
  }
  CHECK(lines == config_key_values(cfg).size());
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  TempDir tmp;
  std::mt19937_64 rng(3);
  NamedParams params;
  params.emplace_back("encoder.W1", Tensor::randn(3, 4, rng));
  params.emplace_back("encoder.b1", Tensor::randn(1, 4, rng));
  const std::string path = (tmp.path / "t.ckpt").string();
  save_checkpoint(path, params);

  // header is the versioned magic line
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "cgfl-ckpt-v1");

  NamedParams loaded = load_checkpoint(path);
  REQUIRE(loaded.size() == params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    CHECK(loaded[i].first == params[i].first);
    REQUIRE(loaded[i].second.size() == params[i].second.size());
    for (std::size_t k = 0; k < params[i].second.size(); ++k) {
      CHECK(loaded[i].second.data()[k] == params[i].second.data()[k]);
    }
  }
  CHECK_THROWS(load_checkpoint((tmp.path / "missing.ckpt").string()));
}

TEST_CASE("synthetic graph corpus is labeled, sized, and deterministic") {
  std::vector<Graph> a = synth_graph_corpus(3, 4, 10, 8, 7);
  std::vector<Graph> b = synth_graph_corpus(3, 4, 10, 8, 7);
  REQUIRE(a.size() == 12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].graph_label == static_cast<int>(i / 4));
    CHECK(a[i].num_nodes == 10);
    CHECK(a[i].edges == b[i].edges);
  }
  CHECK_THROWS(synth_graph_corpus(1, 4, 10, 8, 7));
}

TEST_CASE("graph-level task runs end to end") {
  RunConfig cfg = quick_config(Mode::kTeacherOnly);
  cfg.task = TaskKind::kGraphTask;
  cfg.dataset.graph_classes = 4;
  cfg.dataset.graphs_per_class = 8;
  cfg.dataset.graph_nodes = 8;
  cfg.episode.k_shot = 2;
  cfg.episode.query_per_class = 3;
  PipelineResult res = run_pipeline(cfg);
  CHECK(res.test_mean >= 0.0);
  CHECK(res.test_mean <= 1.0);
}

TEST_CASE("sweep shares seeds across values and survives per-run errors") {
  RunConfig cfg = quick_config(Mode::kNoPretrain);
  std::vector<SweepRow> rows = sweep(cfg, SweepAxis::kKShot, {"1", "2", "0"}, 2);
  REQUIRE(rows.size() == 3);
  for (const SweepRow& r : rows) CHECK(r.axis == "k_shot");
  CHECK_FALSE(rows[0].failed);
  CHECK_FALSE(rows[1].failed);
  CHECK(rows[2].failed);  // k_shot = 0 violates the episode contract
  CHECK_FALSE(rows[2].error.empty());

  // determinism: the same sweep again gives the same numbers
  std::vector<SweepRow> again = sweep(cfg, SweepAxis::kKShot, {"1", "2", "0"}, 2);
  CHECK(rows[0].mean == again[0].mean);
  CHECK(rows[1].stddev == again[1].stddev);
}

TEST_CASE("sweep CSV uses the tidy axis,value,mean,std schema") {
  TempDir tmp;
  std::vector<SweepRow> rows = {{"k_shot", "1", 0.5, 0.1, false, ""},
                                {"k_shot", "2", 0.75, 0.05, false, ""}};
  const std::string path = (tmp.path / "sweep.csv").string();
  write_sweep_csv(path, rows);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "axis,value,mean,std");
  std::getline(in, line);
  CHECK(line.rfind("k_shot,1,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("k_shot,2,", 0) == 0);
  CHECK_FALSE(std::getline(in, line));
}
