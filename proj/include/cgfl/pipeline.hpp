#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cgfl/augment.hpp"
#include "cgfl/distill.hpp"
#include "cgfl/encoder.hpp"
#include "cgfl/fewshot.hpp"
#include "cgfl/graph.hpp"
#include "cgfl/infoprobe.hpp"
#include "cgfl/pretrain.hpp"

namespace cgfl {

enum class Mode { kCgfl, kTeacherOnly, kNoPretrain };
enum class TaskKind { kNodeTask, kGraphTask };

Mode parse_mode(const std::string& s);
Setting parse_setting(const std::string& s);
TaskKind parse_task(const std::string& s);
/// "ND+ER+FM" style augmentation set; unknown tokens are an error.
void apply_aug_set(AugmentConfig& cfg, const std::string& aug_set);

struct DatasetSpec {
  // Citation files (node task only); empty means synthetic.
  std::string node_file;
  std::string edge_file;
  // Synthetic SBM parameters (node task) / per-class corpus (graph task).
  std::size_t sbm_blocks = 4;
  std::size_t sbm_nodes_per_block = 25;
  double sbm_p_in = 0.9;
  double sbm_p_out = 0.05;
  std::size_t sbm_feature_dim = 16;
  // Graph task corpus.
  std::size_t graphs_per_class = 20;
  std::size_t graph_classes = 4;
  std::size_t graph_nodes = 20;

  bool is_citation() const { return !node_file.empty(); }
};

struct RunConfig {
  DatasetSpec dataset;
  TaskKind task = TaskKind::kNodeTask;
  Mode mode = Mode::kCgfl;
  Setting setting = Setting::kInductive;
  std::size_t num_novel_classes = 2;
  double label_rate = 1.0;
  int test_episodes = 100;
  EpisodeSpec episode;
  AugmentConfig aug;
  PretrainConfig pretrain;
  MetaConfig meta;
  ProbeConfig probe;
  bool run_probe = false;
  std::size_t d_hidden = 64;
  std::size_t d_out = 64;
  std::size_t d_proj = 32;
  std::uint64_t seed = 1;
  std::string output_dir;

  void validate() const;
};

/// Canonical key=value serialization; the basis of the config hash and of
/// the config.txt written to the output directory.
std::vector<std::pair<std::string, std::string>> config_key_values(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

/// Deterministic per-stage RNG seed derived from (run seed, stage index).
std::uint64_t stage_seed(std::uint64_t seed, std::uint64_t stage_index);

struct MetricsRecord {
  std::string run_id;
  std::uint64_t config_hash = 0;
  std::string stage;
  std::string metric;
  double value = 0.0;
  std::int64_t timestamp = 0;
};

struct PipelineResult {
  double test_mean = 0.0;
  double test_std = 0.0;
  std::vector<MetricsRecord> metrics;
  std::vector<std::string> stages_run;
};

/// Executes the configured stages (pretrain -> distill -> meta-train ->
/// meta-test [-> probe]) per mode/setting; writes checkpoints, CSVs, and
/// metrics under cfg.output_dir when set.
PipelineResult run_pipeline(const RunConfig& cfg);

enum class SweepAxis { kKShot, kLabelRate, kAugSet };

SweepAxis parse_sweep_axis(const std::string& s);

struct SweepRow {
  std::string axis;
  std::string value;
  double mean = 0.0;  // mean over seeds of per-run mean accuracy
  double stddev = 0.0;
  bool failed = false;
  std::string error;
};

/// One run per (value, seed); seeds are cfg.seed .. cfg.seed + num_seeds - 1
/// shared across values. Per-run errors are recorded and the sweep continues.
std::vector<SweepRow> sweep(const RunConfig& cfg, SweepAxis axis,
                            const std::vector<std::string>& values, int num_seeds);

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

/// Synthetic multi-graph corpus for graph-level tasks: class c graphs are
/// Erdos-Renyi with class-dependent density and a class-centroid feature.
std::vector<Graph> synth_graph_corpus(std::size_t classes, std::size_t graphs_per_class,
                                      std::size_t nodes, std::size_t feature_dim,
                                      std::uint64_t seed);

}  // namespace cgfl
