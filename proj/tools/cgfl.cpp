// Command-line harness for the CGFL pipeline: single runs and sweeps over
// shot number, label rate, or augmentation set.

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "cgfl/pipeline.hpp"

namespace {

void add_common_options(CLI::App& app, cgfl::RunConfig& cfg, std::string& mode,
                        std::string& setting, std::string& task, std::string& aug_set) {
  app.add_option("--nodes", cfg.dataset.node_file, "citation node file (id<TAB>features<TAB>label)");
  app.add_option("--edges", cfg.dataset.edge_file, "citation edge file (src<TAB>dst)");
  app.add_option("--sbm-blocks", cfg.dataset.sbm_blocks, "synthetic SBM: number of blocks");
  app.add_option("--sbm-nodes", cfg.dataset.sbm_nodes_per_block, "synthetic SBM: nodes per block");
  app.add_option("--sbm-p-in", cfg.dataset.sbm_p_in, "synthetic SBM: within-block edge probability");
  app.add_option("--sbm-p-out", cfg.dataset.sbm_p_out, "synthetic SBM: cross-block edge probability");
  app.add_option("--sbm-feature-dim", cfg.dataset.sbm_feature_dim, "synthetic feature dimension");
  app.add_option("--graph-classes", cfg.dataset.graph_classes, "graph task: number of classes");
  app.add_option("--graphs-per-class", cfg.dataset.graphs_per_class, "graph task: graphs per class");
  app.add_option("--graph-nodes", cfg.dataset.graph_nodes, "graph task: nodes per graph");

  app.add_option("--mode", mode, "cgfl | teacher | no-pretrain")->default_str("cgfl");
  app.add_option("--setting", setting, "inductive | transductive")->default_str("inductive");
  app.add_option("--task", task, "node | graph")->default_str("node");
  app.add_option("--n-way", cfg.episode.n_way, "classes per episode");
  app.add_option("--k-shot", cfg.episode.k_shot, "support instances per class");
  app.add_option("--query-per-class", cfg.episode.query_per_class, "query instances per class");
  app.add_option("--label-rate", cfg.label_rate, "fraction of base labels kept");
  app.add_option("--num-novel", cfg.num_novel_classes, "number of novel (meta-test) classes");
  app.add_option("--test-episodes", cfg.test_episodes, "meta-test episode count");
  app.add_option("--aug-set", aug_set, "enabled augmentations, e.g. ND+ER+FM");
  app.add_option("--node-drop", cfg.aug.node_drop_rate, "node drop rate");
  app.add_option("--edge-remove", cfg.aug.edge_remove_rate, "edge removing rate");
  app.add_option("--feat-mask", cfg.aug.feature_mask_rate, "feature masking rate");

  app.add_option("--pretrain-lr", cfg.pretrain.lr, "pre-training learning rate");
  app.add_option("--pretrain-epochs", cfg.pretrain.epochs, "pre-training epochs");
  app.add_option("--pretrain-steps", cfg.pretrain.steps_per_epoch, "steps per epoch");
  app.add_option("--tau", cfg.pretrain.tau, "EMA decay rate");
  app.add_option("--inner-lr", cfg.meta.inner_lr, "MAML inner step size");
  app.add_option("--outer-lr", cfg.meta.outer_lr, "MAML outer step size");
  app.add_option("--inner-steps", cfg.meta.inner_steps, "inner adaptation steps");
  app.add_option("--tasks-per-batch", cfg.meta.tasks_per_batch, "episodes per outer step");
  app.add_option("--meta-epochs", cfg.meta.meta_epochs, "meta-training epochs");
  app.add_option("--outer-steps", cfg.meta.outer_steps_per_epoch, "outer steps per epoch");

  app.add_flag("--probe", cfg.run_probe, "run the information-discard probe");
  app.add_option("--probe-steps", cfg.probe.steps, "probe optimization steps");
  app.add_option("--probe-weight", cfg.probe.entropy_weight, "probe entropy trade-off weight");

  app.add_option("--d-hidden", cfg.d_hidden, "GCN hidden width");
  app.add_option("--d-out", cfg.d_out, "encoder output width");
  app.add_option("--d-proj", cfg.d_proj, "projector width");

  app.add_option("--seed", cfg.seed, "run seed (stage seeds derive from it)");
  app.add_option("--out", cfg.output_dir, "output directory");
}

void finalize(cgfl::RunConfig& cfg, const std::string& mode, const std::string& setting,
              const std::string& task, const std::string& aug_set) {
  cfg.mode = cgfl::parse_mode(mode);
  cfg.setting = cgfl::parse_setting(setting);
  cfg.task = cgfl::parse_task(task);
  cfg.pretrain.setting = cfg.setting;
  if (!aug_set.empty()) cgfl::apply_aug_set(cfg.aug, aug_set);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CGFL: contrastive pre-training, self-distillation, and few-shot graph learning"};
  app.require_subcommand(1);
  app.set_config("--config", "", "config file (key=value; flags override file values)");

  cgfl::RunConfig run_cfg;
  std::string run_mode = "cgfl", run_setting = "inductive", run_task = "node", run_aug_set;
  CLI::App* run = app.add_subcommand("run", "execute one pipeline run");
  add_common_options(*run, run_cfg, run_mode, run_setting, run_task, run_aug_set);

  cgfl::RunConfig sweep_cfg;
  std::string sweep_mode = "cgfl", sweep_setting = "inductive", sweep_task = "node", sweep_aug_set;
  std::string axis = "k_shot";
  std::string values = "1,2,3,4,5";
  int sweep_seeds = 5;
  std::string sweep_out = "sweep.csv";
  CLI::App* sw = app.add_subcommand("sweep", "run the pipeline across one axis");
  add_common_options(*sw, sweep_cfg, sweep_mode, sweep_setting, sweep_task, sweep_aug_set);
  sw->add_option("--axis", axis, "k_shot | label_rate | aug_set");
  sw->add_option("--values", values, "comma-separated axis values");
  sw->add_option("--sweep-seeds", sweep_seeds, "seeds per value");
  sw->add_option("--sweep-out", sweep_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      finalize(run_cfg, run_mode, run_setting, run_task, run_aug_set);
      cgfl::PipelineResult result = cgfl::run_pipeline(run_cfg);
      std::cout << "meta-test accuracy: " << result.test_mean << " +/- " << result.test_std
                << " over " << run_cfg.test_episodes << " episodes\n";
      return 0;
    }
    finalize(sweep_cfg, sweep_mode, sweep_setting, sweep_task, sweep_aug_set);
    std::vector<std::string> value_list;
    std::stringstream ss(values);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (!token.empty()) value_list.push_back(token);
    }
    auto rows = cgfl::sweep(sweep_cfg, cgfl::parse_sweep_axis(axis), value_list, sweep_seeds);
    cgfl::write_sweep_csv(sweep_out, rows);
    bool any_failed = false;
    for (const auto& row : rows) {
      if (row.failed) {
        std::cerr << "sweep value " << row.value << " failed: " << row.error << "\n";
        any_failed = true;
      } else {
        std::cout << row.axis << "=" << row.value << ": " << row.mean << " +/- " << row.stddev
                  << "\n";
      }
    }
    return any_failed ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
