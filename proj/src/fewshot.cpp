#include "cgfl/fewshot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cgfl {

void MetaConfig::validate() const {
  if (inner_lr < 0.0 || outer_lr < 0.0) throw std::invalid_argument("MetaConfig: negative lr");
  if (inner_steps < 1) throw std::invalid_argument("MetaConfig: inner_steps >= 1 required");
  if (!first_order) {
    throw std::invalid_argument("MetaConfig: second-order adaptation is not supported");
  }
}

TaskData TaskData::node_task(const Graph& g) {
  TaskData t;
  t.kind = Kind::kNode;
  t.graph = &g;
  t.prop = propagation_matrix(g);
  return t;
}

TaskData TaskData::graph_task(const std::vector<Graph>& graphs) {
  TaskData t;
  t.kind = Kind::kGraphLevel;
  t.graphs = &graphs;
  t.props.reserve(graphs.size());
  for (const Graph& g : graphs) t.props.push_back(propagation_matrix(g));
  return t;
}

int TaskData::label_of(int ref) const {
  if (kind == Kind::kNode) return graph->node_labels.at(static_cast<std::size_t>(ref));
  return graphs->at(static_cast<std::size_t>(ref)).graph_label;
}

Tensor TaskData::embed(Tape& tape, const EncoderParams& params,
                       const std::vector<int>& refs) const {
  if (kind == Kind::kNode) {
    EncodeResult r = encode_nodes(tape, params, prop, graph->features);
    std::vector<std::size_t> rows(refs.begin(), refs.end());
    return gather_rows(tape, r.out, rows);
  }
  std::vector<Tensor> rows;
  rows.reserve(refs.size());
  for (int ref : refs) {
    const auto i = static_cast<std::size_t>(ref);
    EncodeResult r = encode_nodes(tape, params, props[i], (*graphs)[i].features);
    rows.push_back(readout(tape, r.out));
  }
  return concat_rows(tape, rows);
}

Prototypes build_prototypes(Tape& tape, const Tensor& support_emb, const Episode& episode) {
  if (support_emb.rows() != episode.support.size()) {
    throw std::invalid_argument("build_prototypes: embedding/support size mismatch");
  }
  std::vector<Tensor> centroids;
  for (int c = 0; c < episode.n_way; ++c) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < episode.support.size(); ++i) {
      if (episode.support[i].second == c) rows.push_back(i);
    }
    centroids.push_back(mean_rows(tape, gather_rows(tape, support_emb, rows)));
  }
  return {concat_rows(tape, centroids)};
}

std::pair<Tensor, double> proto_loss(Tape& tape, const Tensor& query_emb,
                                     const std::vector<int>& query_labels,
                                     const Prototypes& protos) {
  Tensor logits = scale(tape, pairwise_sqdist(tape, query_emb, protos.centroids), -1.0);
  Tensor loss = softmax_cross_entropy(tape, logits, query_labels);
  const std::vector<int> preds = argmax_rows(logits);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == query_labels[i]) ++correct;
  }
  const double acc = static_cast<double>(correct) / static_cast<double>(preds.size());
  return {loss, acc};
}

namespace {

struct SupportSplit {
  std::vector<int> proto_refs;
  Episode proto_episode;  // support entries used for prototypes
  std::vector<int> query_refs;
  std::vector<int> query_labels;
};

// Per-class halves of the support set; with k_shot < 2 the whole support
// doubles as pseudo-query (its own class prototype then contains it).
SupportSplit split_support(const Episode& episode) {
  SupportSplit out;
  out.proto_episode.n_way = episode.n_way;
  if (episode.k_shot < 2) {
    out.proto_episode.k_shot = episode.k_shot;
    for (const auto& [ref, cls] : episode.support) {
      out.proto_refs.push_back(ref);
      out.proto_episode.support.emplace_back(ref, cls);
      out.query_refs.push_back(ref);
      out.query_labels.push_back(cls);
    }
    return out;
  }
  const int half = (episode.k_shot + 1) / 2;
  out.proto_episode.k_shot = half;
  std::vector<int> seen(static_cast<std::size_t>(episode.n_way), 0);
  for (const auto& [ref, cls] : episode.support) {
    if (seen[static_cast<std::size_t>(cls)]++ < half) {
      out.proto_refs.push_back(ref);
      out.proto_episode.support.emplace_back(ref, cls);
    } else {
      out.query_refs.push_back(ref);
      out.query_labels.push_back(cls);
    }
  }
  return out;
}

std::pair<Tensor, double> support_loss(Tape& tape, const EncoderParams& params,
                                       const Episode& episode, const TaskData& task) {
  const SupportSplit split = split_support(episode);
  Tensor proto_emb = task.embed(tape, params, split.proto_refs);
  Tensor query_emb = task.embed(tape, params, split.query_refs);
  Prototypes protos = build_prototypes(tape, proto_emb, split.proto_episode);
  return proto_loss(tape, query_emb, split.query_labels, protos);
}

std::pair<Tensor, double> query_loss(Tape& tape, const EncoderParams& params,
                                     const Episode& episode, const TaskData& task) {
  std::vector<int> support_refs, query_refs, query_labels;
  for (const auto& [ref, cls] : episode.support) support_refs.push_back(ref);
  for (const auto& [ref, cls] : episode.query) {
    query_refs.push_back(ref);
    query_labels.push_back(cls);
  }
  Tensor support_emb = task.embed(tape, params, support_refs);
  Tensor query_emb = task.embed(tape, params, query_refs);
  Prototypes protos = build_prototypes(tape, support_emb, episode);
  return proto_loss(tape, query_emb, query_labels, protos);
}

void assert_no_leak(const Episode& episode, const TaskData& task,
                    const std::set<int>& allowed_classes) {
  for (const auto& [ref, cls] : episode.support) {
    if (!allowed_classes.count(task.label_of(ref))) {
      throw std::runtime_error("episode leaks an instance outside the allowed classes");
    }
  }
  for (const auto& [ref, cls] : episode.query) {
    if (!allowed_classes.count(task.label_of(ref))) {
      throw std::runtime_error("episode leaks an instance outside the allowed classes");
    }
  }
}

}  // namespace

EncoderParams inner_adapt(const EncoderParams& params, const Episode& episode,
                          const TaskData& task, const MetaConfig& cfg) {
  cfg.validate();
  if (episode.support.empty()) throw std::invalid_argument("inner_adapt: empty support");
  EncoderParams adapted = params.clone();
  adapted.set_requires_grad(true);
  std::vector<Tensor> adapted_params = adapted.parameters();
  for (int step = 0; step < cfg.inner_steps; ++step) {
    Tape tape;
    auto [loss, acc] = support_loss(tape, adapted, episode, task);
    tape.backward(loss);
    sgd_step(adapted_params, cfg.inner_lr);
  }
  return adapted;
}

std::pair<double, double> evaluate_episode(const EncoderParams& params, const Episode& episode,
                                           const TaskData& task) {
  Tape tape;
  EncoderParams frozen = params.clone();
  frozen.set_requires_grad(false);
  auto [loss, acc] = query_loss(tape, frozen, episode, task);
  return {loss.item(), acc};
}

MetaTrainResult meta_train(const EncoderParams& init, const TaskData& task,
                           const LabeledPool& base_pool, const std::set<int>& base_classes,
                           const EpisodeSpec& ep, const MetaConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  MetaTrainResult result;
  result.params = init.clone();
  result.params.set_requires_grad(true);
  std::vector<Tensor> meta_params = result.params.parameters();

  for (int epoch = 0; epoch < cfg.meta_epochs; ++epoch) {
    double epoch_acc = 0.0, epoch_loss = 0.0;
    int episode_count = 0;
    for (int outer = 0; outer < cfg.outer_steps_per_epoch; ++outer) {
      std::vector<std::vector<double>> grad_sums(meta_params.size());
      for (std::size_t k = 0; k < meta_params.size(); ++k) {
        grad_sums[k].assign(meta_params[k].size(), 0.0);
      }
      for (int t = 0; t < cfg.tasks_per_batch; ++t) {
        Episode episode =
            sample_episode(base_pool, base_classes, ep.n_way, ep.k_shot, ep.query_per_class, rng);
        assert_no_leak(episode, task, base_classes);
        EncoderParams adapted = inner_adapt(result.params, episode, task, cfg);
        Tape tape;
        auto [loss, acc] = query_loss(tape, adapted, episode, task);
        tape.backward(loss);
        // First-order update: gradients at the adapted parameters stand in
        // for the meta-gradient.
        std::vector<Tensor> adapted_params = adapted.parameters();
        for (std::size_t k = 0; k < adapted_params.size(); ++k) {
          const auto& g = adapted_params[k].grad();
          for (std::size_t i = 0; i < g.size(); ++i) grad_sums[k][i] += g[i];
        }
        epoch_acc += acc;
        epoch_loss += loss.item();
        ++episode_count;
      }
      for (std::size_t k = 0; k < meta_params.size(); ++k) {
        for (std::size_t i = 0; i < meta_params[k].size(); ++i) {
          meta_params[k].data()[i] -= cfg.outer_lr * grad_sums[k][i];
        }
      }
    }
    MetaCurvePoint point;
    point.epoch = epoch;
    point.mean_query_acc = episode_count ? epoch_acc / episode_count : 0.0;
    point.mean_query_loss = episode_count ? epoch_loss / episode_count : 0.0;
    result.curve.push_back(point);
  }
  return result;
}

MetaTestResult meta_test(const EncoderParams& params, const TaskData& task,
                         const LabeledPool& novel_pool, const std::set<int>& novel_classes,
                         const EpisodeSpec& ep, int episodes, const MetaConfig& cfg,
                         std::mt19937_64& rng) {
  cfg.validate();
  std::vector<double> accuracies;
  accuracies.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    Episode episode =
        sample_episode(novel_pool, novel_classes, ep.n_way, ep.k_shot, ep.query_per_class, rng);
    assert_no_leak(episode, task, novel_classes);
    EncoderParams adapted = inner_adapt(params, episode, task, cfg);
    auto [loss, acc] = evaluate_episode(adapted, episode, task);
    accuracies.push_back(acc);
  }
  MetaTestResult result;
  result.episodes = episodes;
  double mean = 0.0;
  for (double a : accuracies) mean += a;
  mean /= static_cast<double>(accuracies.size());
  double var = 0.0;
  for (double a : accuracies) var += (a - mean) * (a - mean);
  result.mean_accuracy = mean;
  result.std_accuracy = std::sqrt(var / static_cast<double>(accuracies.size()));
  return result;
}

}  // namespace cgfl
