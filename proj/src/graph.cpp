#include "cgfl/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cgfl {

int Graph::num_classes() const {
  int mx = -1;
  for (int c : node_labels) mx = std::max(mx, c);
  return mx + 1;
}

void Graph::validate() const {
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= static_cast<int>(num_nodes) || b >= static_cast<int>(num_nodes)) {
      throw std::runtime_error("Graph: edge endpoint out of range");
    }
    if (a == b) throw std::runtime_error("Graph: stored self-loop");
    auto key = std::minmax(a, b);
    if (!seen.insert({key.first, key.second}).second) {
      throw std::runtime_error("Graph: duplicate undirected edge");
    }
  }
  if (features.defined() && features.rows() != num_nodes) {
    throw std::runtime_error("Graph: feature row count != num_nodes");
  }
  if (!node_labels.empty() && node_labels.size() != num_nodes) {
    throw std::runtime_error("Graph: label count != num_nodes");
  }
}

Graph Graph::without_labels() const {
  Graph g = *this;
  g.node_labels.clear();
  g.graph_label = -1;
  return g;
}

void add_edge(Graph& g, int a, int b) {
  if (a == b) return;
  if (a > b) std::swap(a, b);
  for (const auto& e : g.edges) {
    if (e.first == a && e.second == b) return;
  }
  g.edges.emplace_back(a, b);
}

Tensor propagation_matrix(const Graph& g) {
  const std::size_t n = g.num_nodes;
  Tensor prop(n, n);
  std::vector<double> degree(n, 1.0);  // self-loop
  for (const auto& [a, b] : g.edges) {
    degree[static_cast<std::size_t>(a)] += 1.0;
    degree[static_cast<std::size_t>(b)] += 1.0;
  }
  std::vector<double> dinv(n);
  for (std::size_t i = 0; i < n; ++i) dinv[i] = 1.0 / std::sqrt(degree[i]);
  for (std::size_t i = 0; i < n; ++i) prop(i, i) = dinv[i] * dinv[i];
  for (const auto& [a, b] : g.edges) {
    const auto i = static_cast<std::size_t>(a), j = static_cast<std::size_t>(b);
    prop(i, j) = dinv[i] * dinv[j];
    prop(j, i) = dinv[i] * dinv[j];
  }
  return prop;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace

Graph load_citation_dataset(const std::string& node_file, const std::string& edge_file) {
  std::ifstream nodes(node_file);
  if (!nodes) throw std::runtime_error("load_citation_dataset: cannot open " + node_file);

  std::vector<std::vector<double>> feature_rows;
  std::vector<int> labels;
  std::map<long, int> id_to_index;  // external node id -> dense index
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(nodes, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw std::runtime_error(node_file + ":" + std::to_string(lineno) +
                               ": expected id<TAB>features<TAB>label");
    }
    long long_id;
    try {
      long_id = std::stol(fields[0]);
    } catch (const std::exception&) {
      throw std::runtime_error(node_file + ":" + std::to_string(lineno) + ": bad node id");
    }
    if (!id_to_index.emplace(long_id, static_cast<int>(feature_rows.size())).second) {
      throw std::runtime_error(node_file + ":" + std::to_string(lineno) + ": duplicate node id");
    }
    std::vector<double> feats;
    std::istringstream fs(fields[1]);
    double v;
    while (fs >> v) feats.push_back(v);
    if (!feature_rows.empty() && feats.size() != feature_rows.front().size()) {
      throw std::runtime_error(node_file + ":" + std::to_string(lineno) +
                               ": inconsistent feature width");
    }
    int label;
    try {
      label = std::stoi(fields[2]);
    } catch (const std::exception&) {
      throw std::runtime_error(node_file + ":" + std::to_string(lineno) + ": bad label");
    }
    feature_rows.push_back(std::move(feats));
    labels.push_back(label);
  }

  Graph g;
  g.num_nodes = feature_rows.size();
  const std::size_t d = feature_rows.empty() ? 0 : feature_rows.front().size();
  g.features = Tensor(g.num_nodes, d);
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    std::copy(feature_rows[i].begin(), feature_rows[i].end(),
              g.features.data().begin() + i * d);
  }
  g.node_labels = std::move(labels);

  std::ifstream edges(edge_file);
  if (!edges) throw std::runtime_error("load_citation_dataset: cannot open " + edge_file);
  std::set<std::pair<int, int>> edge_set;
  lineno = 0;
  while (std::getline(edges, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream es(line);
    long src, dst;
    if (!(es >> src >> dst)) {
      throw std::runtime_error(edge_file + ":" + std::to_string(lineno) + ": expected src dst");
    }
    const auto si = id_to_index.find(src);
    const auto di = id_to_index.find(dst);
    if (si == id_to_index.end() || di == id_to_index.end()) {
      throw std::runtime_error(edge_file + ":" + std::to_string(lineno) +
                               ": edge endpoint not in node file");
    }
    int a = si->second, b = di->second;
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    edge_set.insert({a, b});
  }
  g.edges.assign(edge_set.begin(), edge_set.end());
  g.validate();
  return g;
}

void save_citation_dataset(const Graph& g, const std::string& node_file,
                           const std::string& edge_file) {
  std::ofstream nodes(node_file);
  if (!nodes) throw std::runtime_error("save_citation_dataset: cannot open " + node_file);
  nodes << std::setprecision(17);
  const std::size_t d = g.feature_dim();
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    nodes << i << '\t';
    for (std::size_t j = 0; j < d; ++j) nodes << g.features(i, j) << (j + 1 == d ? "" : " ");
    nodes << '\t' << (g.has_node_labels() ? g.node_labels[i] : 0) << '\n';
  }
  std::ofstream edges(edge_file);
  if (!edges) throw std::runtime_error("save_citation_dataset: cannot open " + edge_file);
  for (const auto& [a, b] : g.edges) edges << a << '\t' << b << '\n';
}

Graph synth_sbm(std::size_t blocks, std::size_t nodes_per_block, double p_in, double p_out,
                std::size_t feature_dim, std::uint64_t seed) {
  if (p_out < 0.0 || p_in > 1.0 || p_out > p_in) {
    throw std::invalid_argument("synth_sbm: need 0 <= p_out <= p_in <= 1");
  }
  if (feature_dim < blocks) {
    throw std::invalid_argument("synth_sbm: feature_dim must be >= blocks for block centroids");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  // Feature noise is deliberately large relative to the unit centroids so
  // that raw features alone are a weak classifier and structure matters.
  std::normal_distribution<double> noise(0.0, 2.0);

  Graph g;
  g.num_nodes = blocks * nodes_per_block;
  g.features = Tensor(g.num_nodes, feature_dim);
  g.node_labels.resize(g.num_nodes);
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    const std::size_t block = i / nodes_per_block;
    g.node_labels[i] = static_cast<int>(block);
    for (std::size_t j = 0; j < feature_dim; ++j) {
      g.features(i, j) = (j == block ? 1.0 : 0.0) + noise(rng);
    }
  }
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    for (std::size_t j = i + 1; j < g.num_nodes; ++j) {
      const bool same = (i / nodes_per_block) == (j / nodes_per_block);
      if (coin(rng) < (same ? p_in : p_out)) {
        g.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  g.validate();
  return g;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& nodes) {
  std::vector<int> remap(g.num_nodes, -1);
  std::vector<int> kept;
  for (int v : nodes) {
    if (v < 0 || v >= static_cast<int>(g.num_nodes)) {
      throw std::invalid_argument("induced_subgraph: node index out of range");
    }
    if (remap[static_cast<std::size_t>(v)] < 0) {
      remap[static_cast<std::size_t>(v)] = static_cast<int>(kept.size());
      kept.push_back(v);
    }
  }
  Graph sub;
  sub.num_nodes = kept.size();
  const std::size_t d = g.feature_dim();
  sub.features = Tensor(sub.num_nodes, d);
  if (g.has_node_labels()) sub.node_labels.resize(sub.num_nodes);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto orig = static_cast<std::size_t>(kept[i]);
    for (std::size_t j = 0; j < d; ++j) sub.features(i, j) = g.features(orig, j);
    if (g.has_node_labels()) sub.node_labels[i] = g.node_labels[orig];
  }
  for (const auto& [a, b] : g.edges) {
    const int va = remap[static_cast<std::size_t>(a)];
    const int vb = remap[static_cast<std::size_t>(b)];
    if (va >= 0 && vb >= 0) sub.edges.emplace_back(std::min(va, vb), std::max(va, vb));
  }
  sub.graph_label = g.graph_label;
  sub.validate();
  return sub;
}

ClassSplit::ClassSplit(std::set<int> base, std::set<int> novel)
    : base_classes(std::move(base)), novel_classes(std::move(novel)) {
  if (base_classes.empty() || novel_classes.empty()) {
    throw std::invalid_argument("ClassSplit: both class sets must be non-empty");
  }
  for (int c : novel_classes) {
    if (base_classes.count(c)) {
      throw std::invalid_argument("ClassSplit: base and novel classes overlap (class " +
                                  std::to_string(c) + ")");
    }
  }
}

ClassSplit default_split(const Graph& g, std::size_t num_novel) {
  const int classes = g.num_classes();
  if (static_cast<std::size_t>(classes) <= num_novel) {
    throw std::invalid_argument("default_split: not enough classes");
  }
  std::set<int> base, novel;
  for (int c = 0; c < classes; ++c) {
    if (c >= classes - static_cast<int>(num_novel)) {
      novel.insert(c);
    } else {
      base.insert(c);
    }
  }
  return ClassSplit(std::move(base), std::move(novel));
}

LabeledPool pool_from_graph(const Graph& g, const std::set<int>& classes) {
  LabeledPool pool;
  for (std::size_t i = 0; i < g.node_labels.size(); ++i) {
    if (classes.count(g.node_labels[i])) pool[g.node_labels[i]].push_back(static_cast<int>(i));
  }
  return pool;
}

LabeledPool pool_from_graph_labels(const std::vector<Graph>& graphs,
                                   const std::set<int>& classes) {
  LabeledPool pool;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (classes.count(graphs[i].graph_label)) {
      pool[graphs[i].graph_label].push_back(static_cast<int>(i));
    }
  }
  return pool;
}

void Episode::validate() const {
  if (support.size() != static_cast<std::size_t>(n_way) * static_cast<std::size_t>(k_shot)) {
    throw std::runtime_error("Episode: support size != n_way * k_shot");
  }
  std::vector<int> per_class(static_cast<std::size_t>(n_way), 0);
  for (const auto& [ref, cls] : support) {
    if (cls < 0 || cls >= n_way) throw std::runtime_error("Episode: support class out of range");
    per_class[static_cast<std::size_t>(cls)] += 1;
  }
  for (int count : per_class) {
    if (count != k_shot) throw std::runtime_error("Episode: uneven support classes");
  }
  if (query.empty()) throw std::runtime_error("Episode: empty query set");
  for (const auto& [ref, cls] : query) {
    if (cls < 0 || cls >= n_way) throw std::runtime_error("Episode: query class out of range");
  }
}

Episode sample_episode(const LabeledPool& pool, const std::set<int>& classes, int n_way,
                       int k_shot, int query_per_class, std::mt19937_64& rng) {
  if (static_cast<int>(classes.size()) < n_way) {
    throw std::runtime_error("sample_episode: fewer classes than n_way");
  }
  std::vector<int> candidates(classes.begin(), classes.end());
  std::shuffle(candidates.begin(), candidates.end(), rng);
  candidates.resize(static_cast<std::size_t>(n_way));

  Episode ep;
  ep.n_way = n_way;
  ep.k_shot = k_shot;
  for (int local = 0; local < n_way; ++local) {
    const int cls = candidates[static_cast<std::size_t>(local)];
    const auto it = pool.find(cls);
    const std::size_t need = static_cast<std::size_t>(k_shot + query_per_class);
    if (it == pool.end() || it->second.size() < need) {
      throw std::runtime_error("sample_episode: class " + std::to_string(cls) +
                               " has fewer than " + std::to_string(need) + " instances");
    }
    std::vector<int> instances = it->second;
    std::shuffle(instances.begin(), instances.end(), rng);
    for (int k = 0; k < k_shot; ++k) {
      ep.support.emplace_back(instances[static_cast<std::size_t>(k)], local);
    }
    for (int q = 0; q < query_per_class; ++q) {
      ep.query.emplace_back(instances[static_cast<std::size_t>(k_shot + q)], local);
    }
  }
  ep.validate();
  return ep;
}

LabeledPool apply_label_rate(const LabeledPool& pool, double rate, std::mt19937_64& rng) {
  if (rate <= 0.0 || rate > 1.0) throw std::invalid_argument("apply_label_rate: rate in (0, 1]");
  LabeledPool out;
  for (const auto& [cls, instances] : pool) {
    const auto keep =
        static_cast<std::size_t>(std::ceil(rate * static_cast<double>(instances.size())));
    if (keep == 0) {
      throw std::runtime_error("apply_label_rate: class " + std::to_string(cls) +
                               " empty after subsampling");
    }
    std::vector<int> shuffled = instances;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffled.resize(keep);
    std::sort(shuffled.begin(), shuffled.end());
    out[cls] = std::move(shuffled);
  }
  return out;
}

}  // namespace cgfl
