#include "cgfl/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cgfl/checkpoint.hpp"

namespace cgfl {

namespace fs = std::filesystem;

Mode parse_mode(const std::string& s) {
  if (s == "cgfl") return Mode::kCgfl;
  if (s == "teacher") return Mode::kTeacherOnly;
  if (s == "no-pretrain") return Mode::kNoPretrain;
  throw std::invalid_argument("unknown mode: " + s);
}

Setting parse_setting(const std::string& s) {
  if (s == "inductive") return Setting::kInductive;
  if (s == "transductive") return Setting::kTransductive;
  throw std::invalid_argument("unknown setting: " + s);
}

TaskKind parse_task(const std::string& s) {
  if (s == "node") return TaskKind::kNodeTask;
  if (s == "graph") return TaskKind::kGraphTask;
  throw std::invalid_argument("unknown task: " + s);
}

void apply_aug_set(AugmentConfig& cfg, const std::string& aug_set) {
  cfg.node_drop_enabled = false;
  cfg.edge_remove_enabled = false;
  cfg.feature_mask_enabled = false;
  std::stringstream ss(aug_set);
  std::string token;
  while (std::getline(ss, token, '+')) {
    if (token == "ND") {
      cfg.node_drop_enabled = true;
    } else if (token == "ER") {
      cfg.edge_remove_enabled = true;
    } else if (token == "FM") {
      cfg.feature_mask_enabled = true;
    } else {
      throw std::invalid_argument("unknown augmentation token: " + token);
    }
  }
}

void RunConfig::validate() const {
  if (label_rate <= 0.0 || label_rate > 1.0) {
    throw std::invalid_argument("RunConfig: label_rate in (0, 1]");
  }
  if (task == TaskKind::kGraphTask && dataset.is_citation()) {
    throw std::invalid_argument("RunConfig: citation datasets are node tasks");
  }
  if (episode.n_way < 2 || episode.k_shot < 1 || episode.query_per_class < 1) {
    throw std::invalid_argument("RunConfig: bad episode geometry");
  }
  if (test_episodes < 1) throw std::invalid_argument("RunConfig: test_episodes >= 1");
  aug.validate();
  pretrain.validate();
  meta.validate();
  probe.validate();
}

namespace {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::kCgfl:
      return "cgfl";
    case Mode::kTeacherOnly:
      return "teacher";
    case Mode::kNoPretrain:
      return "no-pretrain";
  }
  return "?";
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::vector<std::pair<std::string, std::string>> config_key_values(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> kv;
  auto put = [&kv](const std::string& k, const std::string& v) { kv.emplace_back(k, v); };
  put("dataset.node_file", cfg.dataset.node_file);
  put("dataset.edge_file", cfg.dataset.edge_file);
  put("dataset.sbm_blocks", std::to_string(cfg.dataset.sbm_blocks));
  put("dataset.sbm_nodes_per_block", std::to_string(cfg.dataset.sbm_nodes_per_block));
  put("dataset.sbm_p_in", fmt(cfg.dataset.sbm_p_in));
  put("dataset.sbm_p_out", fmt(cfg.dataset.sbm_p_out));
  put("dataset.sbm_feature_dim", std::to_string(cfg.dataset.sbm_feature_dim));
  put("dataset.graphs_per_class", std::to_string(cfg.dataset.graphs_per_class));
  put("dataset.graph_classes", std::to_string(cfg.dataset.graph_classes));
  put("dataset.graph_nodes", std::to_string(cfg.dataset.graph_nodes));
  put("task", cfg.task == TaskKind::kNodeTask ? "node" : "graph");
  put("mode", mode_name(cfg.mode));
  put("setting", cfg.setting == Setting::kInductive ? "inductive" : "transductive");
  put("num_novel_classes", std::to_string(cfg.num_novel_classes));
  put("label_rate", fmt(cfg.label_rate));
  put("test_episodes", std::to_string(cfg.test_episodes));
  put("episode.n_way", std::to_string(cfg.episode.n_way));
  put("episode.k_shot", std::to_string(cfg.episode.k_shot));
  put("episode.query_per_class", std::to_string(cfg.episode.query_per_class));
  put("aug.node_drop_rate", fmt(cfg.aug.node_drop_rate));
  put("aug.edge_remove_rate", fmt(cfg.aug.edge_remove_rate));
  put("aug.feature_mask_rate", fmt(cfg.aug.feature_mask_rate));
  put("aug.node_drop_enabled", cfg.aug.node_drop_enabled ? "1" : "0");
  put("aug.edge_remove_enabled", cfg.aug.edge_remove_enabled ? "1" : "0");
  put("aug.feature_mask_enabled", cfg.aug.feature_mask_enabled ? "1" : "0");
  put("aug.mask_mode", cfg.aug.mask_mode == MaskMode::kColumn ? "column" : "entry");
  put("pretrain.lr", fmt(cfg.pretrain.lr));
  put("pretrain.lr_decay", fmt(cfg.pretrain.lr_decay));
  put("pretrain.tau", fmt(cfg.pretrain.tau));
  put("pretrain.epochs", std::to_string(cfg.pretrain.epochs));
  put("pretrain.steps_per_epoch", std::to_string(cfg.pretrain.steps_per_epoch));
  put("pretrain.batch_nodes", std::to_string(cfg.pretrain.batch_nodes));
  put("pretrain.symmetric_loss", cfg.pretrain.symmetric_loss ? "1" : "0");
  put("meta.inner_lr", fmt(cfg.meta.inner_lr));
  put("meta.outer_lr", fmt(cfg.meta.outer_lr));
  put("meta.inner_steps", std::to_string(cfg.meta.inner_steps));
  put("meta.tasks_per_batch", std::to_string(cfg.meta.tasks_per_batch));
  put("meta.meta_epochs", std::to_string(cfg.meta.meta_epochs));
  put("meta.outer_steps_per_epoch", std::to_string(cfg.meta.outer_steps_per_epoch));
  put("meta.first_order", cfg.meta.first_order ? "1" : "0");
  put("probe.entropy_weight", fmt(cfg.probe.entropy_weight));
  put("probe.mc_samples", std::to_string(cfg.probe.mc_samples));
  put("probe.steps", std::to_string(cfg.probe.steps));
  put("probe.lr", fmt(cfg.probe.lr));
  put("probe.sigma_init", fmt(cfg.probe.sigma_init));
  put("probe.sigma_cap", fmt(cfg.probe.sigma_cap));
  put("run_probe", cfg.run_probe ? "1" : "0");
  put("d_hidden", std::to_string(cfg.d_hidden));
  put("d_out", std::to_string(cfg.d_out));
  put("d_proj", std::to_string(cfg.d_proj));
  put("seed", std::to_string(cfg.seed));
  return kv;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0x1f;
    h *= 1099511628211ull;
  };
  for (const auto& [k, v] : config_key_values(cfg)) {
    mix(k);
    mix(v);
  }
  return h;
}

std::uint64_t stage_seed(std::uint64_t seed, std::uint64_t stage_index) {
  // splitmix64 over (seed, stage_index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stage_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<Graph> synth_graph_corpus(std::size_t classes, std::size_t graphs_per_class,
                                      std::size_t nodes, std::size_t feature_dim,
                                      std::uint64_t seed) {
  if (classes < 2) throw std::invalid_argument("synth_graph_corpus: need >= 2 classes");
  if (feature_dim < classes) {
    throw std::invalid_argument("synth_graph_corpus: feature_dim >= classes required");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<Graph> corpus;
  for (std::size_t c = 0; c < classes; ++c) {
    const double p = 0.15 + 0.7 * static_cast<double>(c) / static_cast<double>(classes - 1);
    for (std::size_t k = 0; k < graphs_per_class; ++k) {
      Graph g;
      g.num_nodes = nodes;
      g.graph_label = static_cast<int>(c);
      g.features = Tensor(nodes, feature_dim);
      for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t j = 0; j < feature_dim; ++j) {
          g.features(i, j) = (j == c ? 1.0 : 0.0) + noise(rng);
        }
      }
      for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t j = i + 1; j < nodes; ++j) {
          if (coin(rng) < p) g.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
      }
      corpus.push_back(std::move(g));
    }
  }
  return corpus;
}

namespace {

class MetricsWriter {
 public:
  MetricsWriter(const RunConfig& cfg) : hash_(config_hash(cfg)) {
    std::ostringstream id;
    id << std::hex << hash_ << "-" << std::dec << cfg.seed;
    run_id_ = id.str();
    if (!cfg.output_dir.empty()) path_ = (fs::path(cfg.output_dir) / "metrics.csv").string();
  }

  void add(const std::string& stage, const std::string& metric, double value) {
    MetricsRecord rec;
    rec.run_id = run_id_;
    rec.config_hash = hash_;
    rec.stage = stage;
    rec.metric = metric;
    rec.value = value;
    rec.timestamp = static_cast<std::int64_t>(std::time(nullptr));
    records_.push_back(rec);
    flush_one(rec);
  }

  const std::vector<MetricsRecord>& records() const { return records_; }

 private:
  void flush_one(const MetricsRecord& rec) {
    if (path_.empty()) return;
    const bool fresh = !fs::exists(path_);
    std::ofstream out(path_, std::ios::app);
    if (fresh) out << "run_id,config_hash,stage,metric,value,timestamp\n";
    out << rec.run_id << "," << rec.config_hash << "," << rec.stage << "," << rec.metric << ","
        << std::setprecision(17) << rec.value << "," << rec.timestamp << "\n";
  }

  std::uint64_t hash_;
  std::string run_id_;
  std::string path_;
  std::vector<MetricsRecord> records_;
};

void write_trajectory_csv(const std::string& dir, const std::string& name,
                          const std::vector<StepStat>& traj, bool with_std) {
  if (dir.empty()) return;
  std::ofstream out(fs::path(dir) / name);
  out << (with_std ? "step,loss,embed_std\n" : "step,loss\n");
  out << std::setprecision(12);
  for (const StepStat& s : traj) {
    out << s.step << "," << s.loss;
    if (with_std) out << "," << s.embed_std;
    out << "\n";
  }
}

void write_meta_curve_csv(const std::string& dir, const std::vector<MetaCurvePoint>& curve) {
  if (dir.empty()) return;
  std::ofstream out(fs::path(dir) / "meta_curve.csv");
  out << "epoch,mean_query_acc,mean_query_loss\n" << std::setprecision(12);
  for (const MetaCurvePoint& p : curve) {
    out << p.epoch << "," << p.mean_query_acc << "," << p.mean_query_loss << "\n";
  }
}

void write_probe_csv(const std::string& dir, const std::string& name,
                     const InfoProbeReport& report) {
  if (dir.empty()) return;
  std::ofstream out(fs::path(dir) / name);
  out << "layer,H,recon,entropy_weight,steps\n" << std::setprecision(12);
  for (const ProbeEntry& e : report.entries) {
    out << e.layer << "," << e.discarded_info << "," << e.reconstruction << ","
        << report.entropy_weight << "," << report.steps << "\n";
  }
}

void write_compare_csv(const std::string& dir, const std::vector<LayerDelta>& deltas) {
  if (dir.empty()) return;
  std::ofstream out(fs::path(dir) / "probe_compare.csv");
  out << "layer,H_a,H_b,delta\n" << std::setprecision(12);
  for (const LayerDelta& d : deltas) {
    out << d.layer << "," << d.h_a << "," << d.h_b << "," << d.delta << "\n";
  }
}

void write_config_txt(const RunConfig& cfg) {
  if (cfg.output_dir.empty()) return;
  std::ofstream out(fs::path(cfg.output_dir) / "config.txt");
  for (const auto& [k, v] : config_key_values(cfg)) out << k << " = " << v << "\n";
}

void save_encoder(const std::string& dir, const std::string& name, const EncoderParams& p) {
  if (dir.empty()) return;
  save_checkpoint((fs::path(dir) / name).string(), p.named("encoder"));
}

// Shrink an episode spec to what a (possibly label-rate-limited) pool can
// support: first cap the query count, then trade support for query so at
// least one query instance remains.
EpisodeSpec clamp_episode_spec(EpisodeSpec spec, const LabeledPool& pool) {
  std::size_t smallest = std::numeric_limits<std::size_t>::max();
  for (const auto& [cls, instances] : pool) smallest = std::min(smallest, instances.size());
  if (pool.empty() || smallest < 2) {
    throw std::runtime_error("episode sampling needs at least 2 labeled instances per class");
  }
  const int m = static_cast<int>(smallest);
  if (spec.k_shot + spec.query_per_class <= m) return spec;
  spec.k_shot = std::min(spec.k_shot, m - 1);
  spec.query_per_class = std::min(spec.query_per_class, m - spec.k_shot);
  return spec;
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  if (!cfg.output_dir.empty()) fs::create_directories(cfg.output_dir);
  write_config_txt(cfg);
  MetricsWriter metrics(cfg);
  PipelineResult result;

  try {
    // -- dataset -------------------------------------------------------
    Graph g;
    std::vector<Graph> corpus;
    if (cfg.task == TaskKind::kNodeTask) {
      if (cfg.dataset.is_citation()) {
        g = load_citation_dataset(cfg.dataset.node_file, cfg.dataset.edge_file);
      } else {
        g = synth_sbm(cfg.dataset.sbm_blocks, cfg.dataset.sbm_nodes_per_block,
                      cfg.dataset.sbm_p_in, cfg.dataset.sbm_p_out, cfg.dataset.sbm_feature_dim,
                      stage_seed(cfg.seed, 0));
      }
    } else {
      corpus = synth_graph_corpus(cfg.dataset.graph_classes, cfg.dataset.graphs_per_class,
                                  cfg.dataset.graph_nodes, cfg.dataset.sbm_feature_dim,
                                  stage_seed(cfg.seed, 0));
    }
    const std::size_t d_in = cfg.task == TaskKind::kNodeTask
                                 ? g.feature_dim()
                                 : corpus.front().feature_dim();
    EncoderConfig enc;
    enc.d_in = d_in;
    enc.d_hidden = cfg.d_hidden;
    enc.d_out = cfg.d_out;
    enc.d_proj = cfg.d_proj;

    // -- class split and pools -----------------------------------------
    std::set<int> base_classes, novel_classes;
    LabeledPool base_pool, novel_pool;
    if (cfg.task == TaskKind::kNodeTask) {
      ClassSplit split = default_split(g, cfg.num_novel_classes);
      base_classes = split.base_classes;
      novel_classes = split.novel_classes;
      base_pool = pool_from_graph(g, base_classes);
      novel_pool = pool_from_graph(g, novel_classes);
    } else {
      const int classes = static_cast<int>(cfg.dataset.graph_classes);
      for (int c = 0; c < classes; ++c) {
        if (c >= classes - static_cast<int>(cfg.num_novel_classes)) {
          novel_classes.insert(c);
        } else {
          base_classes.insert(c);
        }
      }
      base_pool = pool_from_graph_labels(corpus, base_classes);
      novel_pool = pool_from_graph_labels(corpus, novel_classes);
    }
    if (cfg.label_rate < 1.0) {
      std::mt19937_64 rng(stage_seed(cfg.seed, 1));
      base_pool = apply_label_rate(base_pool, cfg.label_rate, rng);
    }

    // -- pretrain -------------------------------------------------------
    EncoderParams meta_init;
    PretrainResult pre;
    if (cfg.mode != Mode::kNoPretrain) {
      std::mt19937_64 rng(stage_seed(cfg.seed, 2));
      if (cfg.task == TaskKind::kNodeTask) {
        // Inductive: pretrain on the base-class subgraph only; transductive
        // pulls steps from the full graph too.
        std::vector<int> base_nodes;
        for (std::size_t i = 0; i < g.num_nodes; ++i) {
          if (base_classes.count(g.node_labels[i])) base_nodes.push_back(static_cast<int>(i));
        }
        Graph g_base = induced_subgraph(g, base_nodes);
        std::optional<Graph> g_full;
        if (cfg.setting == Setting::kTransductive) g_full = g;
        pre = pretrain(g_base, g_full, cfg.aug, cfg.pretrain, enc, rng);
      } else {
        std::vector<Graph> selected;
        for (const Graph& gc : corpus) {
          if (cfg.setting == Setting::kTransductive || base_classes.count(gc.graph_label)) {
            selected.push_back(gc);
          }
        }
        pre = pretrain_graphs(selected, cfg.aug, cfg.pretrain, enc, rng);
      }
      write_trajectory_csv(cfg.output_dir, "pretrain_loss.csv", pre.trajectory, true);
      save_encoder(cfg.output_dir, "pretrain.ckpt", pre.encoder);
      if (!pre.trajectory.empty()) {
        metrics.add("pretrain", "initial_loss", pre.trajectory.front().loss);
        metrics.add("pretrain", "final_loss", pre.trajectory.back().loss);
        metrics.add("pretrain", "embed_std", pre.trajectory.back().embed_std);
      }
      result.stages_run.push_back("pretrain");
      meta_init = pre.encoder;
    } else {
      std::mt19937_64 rng(stage_seed(cfg.seed, 2));
      meta_init = EncoderParams::glorot(enc, rng);
    }

    // -- distill --------------------------------------------------------
    if (cfg.mode == Mode::kCgfl) {
      std::mt19937_64 rng(stage_seed(cfg.seed, 3));
      DistillResult dis;
      if (cfg.task == TaskKind::kNodeTask) {
        dis = distill(pre, g, cfg.aug, cfg.pretrain, enc, rng);
      } else {
        dis = distill_graphs(pre, corpus, cfg.aug, cfg.pretrain, enc, rng);
      }
      write_trajectory_csv(cfg.output_dir, "distill_loss.csv", dis.trajectory, false);
      save_encoder(cfg.output_dir, "student.ckpt", dis.student);
      if (!dis.trajectory.empty()) metrics.add("distill", "final_loss", dis.trajectory.back().loss);
      result.stages_run.push_back("distill");
      meta_init = dis.student;
    }

    // -- meta-train / meta-test ----------------------------------------
    TaskData task = cfg.task == TaskKind::kNodeTask ? TaskData::node_task(g)
                                                    : TaskData::graph_task(corpus);
    std::mt19937_64 train_rng(stage_seed(cfg.seed, 4));
    const EpisodeSpec train_spec = clamp_episode_spec(cfg.episode, base_pool);
    if (train_spec.k_shot != cfg.episode.k_shot ||
        train_spec.query_per_class != cfg.episode.query_per_class) {
      metrics.add("meta_train", "k_shot_effective", train_spec.k_shot);
      metrics.add("meta_train", "query_per_class_effective", train_spec.query_per_class);
    }
    MetaTrainResult trained =
        meta_train(meta_init, task, base_pool, base_classes, train_spec, cfg.meta, train_rng);
    write_meta_curve_csv(cfg.output_dir, trained.curve);
    save_encoder(cfg.output_dir, "meta.ckpt", trained.params);
    if (!trained.curve.empty()) {
      metrics.add("meta_train", "final_query_acc", trained.curve.back().mean_query_acc);
      metrics.add("meta_train", "final_query_loss", trained.curve.back().mean_query_loss);
    }
    result.stages_run.push_back("meta_train");

    std::mt19937_64 test_rng(stage_seed(cfg.seed, 5));
    MetaTestResult test = meta_test(trained.params, task, novel_pool, novel_classes,
                                    clamp_episode_spec(cfg.episode, novel_pool),
                                    cfg.test_episodes, cfg.meta, test_rng);
    metrics.add("meta_test", "mean_accuracy", test.mean_accuracy);
    metrics.add("meta_test", "std_accuracy", test.std_accuracy);
    metrics.add("meta_test", "episodes", static_cast<double>(test.episodes));
    if (!cfg.output_dir.empty()) {
      std::ofstream out(fs::path(cfg.output_dir) / "meta_test.csv");
      out << "mean,std,n_episodes\n"
          << std::setprecision(12) << test.mean_accuracy << "," << test.std_accuracy << ","
          << test.episodes << "\n";
    }
    result.stages_run.push_back("meta_test");
    result.test_mean = test.mean_accuracy;
    result.test_std = test.std_accuracy;

    // -- probe (optional) ------------------------------------------------
    if (cfg.run_probe) {
      const Graph& probe_graph = cfg.task == TaskKind::kNodeTask ? g : corpus.front();
      std::mt19937_64 rng(stage_seed(cfg.seed, 6));
      InfoProbeReport trained_report = probe_model(trained.params, probe_graph, cfg.probe, rng);
      std::mt19937_64 init_rng(stage_seed(cfg.seed, 7));
      EncoderParams fresh = EncoderParams::glorot(enc, init_rng);
      InfoProbeReport fresh_report = probe_model(fresh, probe_graph, cfg.probe, rng);
      write_probe_csv(cfg.output_dir, "infoprobe.csv", trained_report);
      write_probe_csv(cfg.output_dir, "infoprobe_fresh.csv", fresh_report);
      write_compare_csv(cfg.output_dir, compare_reports(trained_report, fresh_report));
      for (const ProbeEntry& e : trained_report.entries) {
        metrics.add("probe", "H_" + e.layer, e.discarded_info);
      }
      result.stages_run.push_back("probe");
    }
  } catch (const std::exception& e) {
    metrics.add("pipeline", "error", 1.0);
    result.metrics = metrics.records();
    throw;
  }

  result.metrics = metrics.records();
  return result;
}

SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "k_shot") return SweepAxis::kKShot;
  if (s == "label_rate") return SweepAxis::kLabelRate;
  if (s == "aug_set") return SweepAxis::kAugSet;
  throw std::invalid_argument("unknown sweep axis: " + s);
}

std::vector<SweepRow> sweep(const RunConfig& cfg, SweepAxis axis,
                            const std::vector<std::string>& values, int num_seeds) {
  if (num_seeds < 1) throw std::invalid_argument("sweep: num_seeds >= 1");
  std::vector<SweepRow> rows;
  for (const std::string& value : values) {
    SweepRow row;
    row.axis = axis == SweepAxis::kKShot ? "k_shot"
               : axis == SweepAxis::kLabelRate ? "label_rate"
                                               : "aug_set";
    row.value = value;
    std::vector<double> means;
    try {
      for (int s = 0; s < num_seeds; ++s) {
        RunConfig run = cfg;
        run.output_dir.clear();  // sweep runs keep no per-run artifacts
        run.seed = cfg.seed + static_cast<std::uint64_t>(s);
        switch (axis) {
          case SweepAxis::kKShot:
            run.episode.k_shot = std::stoi(value);
            break;
          case SweepAxis::kLabelRate:
            run.label_rate = std::stod(value);
            break;
          case SweepAxis::kAugSet:
            apply_aug_set(run.aug, value);
            break;
        }
        means.push_back(run_pipeline(run).test_mean);
      }
      double mean = 0.0;
      for (double m : means) mean += m;
      mean /= static_cast<double>(means.size());
      double var = 0.0;
      for (double m : means) var += (m - mean) * (m - mean);
      row.mean = mean;
      row.stddev = std::sqrt(var / static_cast<double>(means.size()));
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_sweep_csv: cannot open " + path);
  out << "axis,value,mean,std\n" << std::setprecision(12);
  for (const SweepRow& r : rows) {
    if (r.failed) {
      out << r.axis << "," << r.value << ",error,error\n";
    } else {
      out << r.axis << "," << r.value << "," << r.mean << "," << r.stddev << "\n";
    }
  }
}

}  // namespace cgfl
