#include "rcc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "rcc/rng.hpp"

namespace rcc {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

AttributedGraph induced_subgraph(const AttributedGraph& graph,
                                 const std::vector<int>& nodes) {
  std::unordered_map<int, int> remap;
  remap.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    remap[nodes[i]] = static_cast<int>(i);

  std::vector<std::pair<int, int>> edges;
  for (int old_i : nodes)
    for (int old_j : graph.adjacency.neighbors(old_i)) {
      if (old_i >= old_j) continue;
      auto it = remap.find(old_j);
      if (it != remap.end()) edges.emplace_back(remap[old_i], it->second);
    }

  AttributedGraph sub;
  sub.adjacency =
      AdjacencyStructure::from_edges(static_cast<int>(nodes.size()), edges);
  sub.features.values = Matrix(nodes.size(), graph.features.values.cols());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto src = graph.features.values.row(nodes[i]);
    std::copy(src.begin(), src.end(), sub.features.values.row(i).begin());
  }
  sub.features.column_names = graph.features.column_names;
  if (graph.labels) {
    std::vector<int> y(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
      y[i] = graph.labels->raw_values()[nodes[i]];
    sub.labels = LabelVector(std::move(y), graph.labels->num_classes(),
                             graph.labels->class_names());
  }
  return sub;
}

}  // namespace

CitationLoadResult load_citation_dataset(const std::string& content_path,
                                         const std::string& cites_path) {
  std::ifstream content(content_path);
  if (!content) throw std::runtime_error("cannot open " + content_path);

  CitationLoadResult result;
  std::unordered_map<std::string, int> node_index;
  std::unordered_map<std::string, int> label_index;
  std::vector<std::string> label_names;
  std::vector<int> labels;
  std::vector<std::vector<double>> rows;
  std::size_t dim = 0;

  std::string line;
  int line_no = 0;
  while (std::getline(content, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() < 3)
      throw std::runtime_error(content_path + ":" + std::to_string(line_no) +
                               ": expected node_id, features, label");
    if (dim == 0) dim = fields.size() - 2;
    if (fields.size() - 2 != dim)
      throw std::runtime_error(content_path + ":" + std::to_string(line_no) +
                               ": inconsistent feature count");
    if (node_index.count(fields.front()))
      throw std::runtime_error(content_path + ":" + std::to_string(line_no) +
                               ": duplicate node id " + fields.front());

    std::vector<double> values(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      std::size_t consumed = 0;
      double v;
      try {
        v = std::stod(fields[j + 1], &consumed);
      } catch (const std::exception&) {
        throw std::runtime_error(content_path + ":" + std::to_string(line_no) +
                                 ": bad feature value '" + fields[j + 1] + "'");
      }
      if (consumed != fields[j + 1].size())
        throw std::runtime_error(content_path + ":" + std::to_string(line_no) +
                                 ": bad feature value '" + fields[j + 1] + "'");
      if (v != 0.0 && v != 1.0) ++result.non_binary_values;
      values[j] = v;
    }

    const std::string& label = fields.back();
    if (label.empty())
      throw std::runtime_error(content_path + ":" + std::to_string(line_no) +
                               ": empty label");
    auto [it, inserted] =
        label_index.emplace(label, static_cast<int>(label_names.size()));
    if (inserted) label_names.push_back(label);

    node_index.emplace(fields.front(), static_cast<int>(rows.size()));
    rows.push_back(std::move(values));
    labels.push_back(it->second);
  }
  if (rows.empty()) throw std::runtime_error(content_path + ": no nodes");

  std::ifstream cites(cites_path);
  if (!cites) throw std::runtime_error("cannot open " + cites_path);
  std::vector<std::pair<int, int>> edges;
  line_no = 0;
  while (std::getline(cites, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() == 1) {
      // some distributions use spaces; accept either separator
      std::istringstream ss(line);
      std::string a, b, extra;
      if (ss >> a >> b && !(ss >> extra)) fields = {a, b};
    }
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw std::runtime_error(cites_path + ":" + std::to_string(line_no) +
                               ": expected `cited<TAB>citing`");
    const auto ia = node_index.find(fields[0]);
    const auto ib = node_index.find(fields[1]);
    if (ia == node_index.end() || ib == node_index.end()) {
      ++result.dropped_edges;
      continue;
    }
    edges.emplace_back(ia->second, ib->second);
  }

  const int n = static_cast<int>(rows.size());
  result.graph.adjacency = AdjacencyStructure::from_edges(n, edges);
  result.graph.features.values = Matrix(rows.size(), dim);
  for (int i = 0; i < n; ++i)
    std::copy(rows[i].begin(), rows[i].end(),
              result.graph.features.values.row(i).begin());
  const int k = static_cast<int>(label_names.size());
  if (k < 2)
    throw std::runtime_error(content_path + ": fewer than two label classes");
  result.graph.labels = LabelVector(std::move(labels), k, label_names);
  return result;
}

AttributedGraph generate_synthetic_homophily_graph(
    const SyntheticGraphConfig& config) {
  const int n = config.nodes;
  const int k = config.num_classes;
  const int d = config.feature_dim;
  if (n < k) throw std::invalid_argument("need n >= k");
  if (k < 2) throw std::invalid_argument("need k >= 2");
  if (d < 1) throw std::invalid_argument("need d >= 1");
  if (config.homophily < 0.0 || config.homophily > 1.0)
    throw std::invalid_argument("homophily outside [0, 1]");
  if (config.signal < 0.0 || config.signal > 1.0)
    throw std::invalid_argument("signal outside [0, 1]");

  Rng rng(config.seed);

  std::vector<int> labels(n);
  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < n; ++i) {
    labels[i] = rng.uniform_int(k);
    members[labels[i]].push_back(i);
  }

  // Same-label pairs are drawn uniformly over all such pairs: a class is
  // picked with weight n_c*(n_c-1), then an ordered pair within it.
  std::vector<double> class_weight(k);
  double total_weight = 0.0;
  for (int c = 0; c < k; ++c) {
    const double m = static_cast<double>(members[c].size());
    class_weight[c] = m * (m - 1.0);
    total_weight += class_weight[c];
  }

  const auto target_edges =
      static_cast<std::size_t>(std::floor(n * config.avg_degree / 2.0));
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(target_edges * 2);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(target_edges);

  const auto edge_key = [n](int a, int b) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) +
           static_cast<std::uint64_t>(b);
  };

  const int max_attempts = 1000;
  while (edges.size() < target_edges) {
    int a = -1, b = -1;
    int attempt = 0;
    for (; attempt < max_attempts; ++attempt) {
      if (rng.bernoulli(config.homophily)) {
        if (total_weight <= 0.0) continue;  // all classes singleton
        double pick = rng.uniform() * total_weight;
        int c = 0;
        while (c + 1 < k && pick >= class_weight[c]) pick -= class_weight[c], ++c;
        const auto& group = members[c];
        if (group.size() < 2) continue;
        a = group[rng.uniform_int(static_cast<int>(group.size()))];
        do {
          b = group[rng.uniform_int(static_cast<int>(group.size()))];
        } while (b == a);
      } else {
        a = rng.uniform_int(n);
        if (static_cast<int>(members[labels[a]].size()) == n) continue;
        do {
          b = rng.uniform_int(n);
        } while (labels[b] == labels[a]);
      }
      if (!seen.count(edge_key(a, b))) break;
    }
    if (attempt == max_attempts)
      throw std::runtime_error(
          "avg_degree too large: cannot place distinct edges");
    seen.insert(edge_key(a, b));
    edges.emplace_back(a, b);
  }

  AttributedGraph graph;
  graph.adjacency = AdjacencyStructure::from_edges(n, edges);

  // Class means: signal-scaled simplex made of repeated class-indicator
  // columns (column j belongs to class j mod k). The noise scale calibrates
  // the signal knob so 1.0 is near-separable and 0.05 still carries a trace
  // of usable evidence.
  constexpr double kNoiseSd = 0.25;
  graph.features.values = Matrix(static_cast<std::size_t>(n),
                                 static_cast<std::size_t>(d));
  for (int i = 0; i < n; ++i) {
    auto row = graph.features.values.row(i);
    for (int j = 0; j < d; ++j) {
      const double mean = (j % k == labels[i]) ? config.signal : 0.0;
      row[j] = mean + kNoiseSd * rng.normal();
    }
  }

  std::vector<std::string> class_names(k);
  for (int c = 0; c < k; ++c) class_names[c] = std::to_string(c);
  graph.labels = LabelVector(std::move(labels), k, std::move(class_names));
  return graph;
}

SnowballSplit snowball_split(const AttributedGraph& graph,
                             double test_fraction, std::uint64_t seed) {
  if (test_fraction <= 0.0 || test_fraction >= 1.0)
    throw std::invalid_argument("test_fraction must be in (0, 1)");
  const int n = graph.node_count();
  const auto want =
      static_cast<std::size_t>(std::ceil(n * test_fraction));

  Rng rng(seed);
  std::vector<char> visited(n, 0);
  std::vector<int> collected;
  collected.reserve(want);
  std::deque<int> frontier;

  const auto pick_unvisited = [&]() {
    int node;
    do {
      node = rng.uniform_int(n);
    } while (visited[node]);
    return node;
  };

  while (collected.size() < want) {
    if (frontier.empty()) {
      const int start = pick_unvisited();
      visited[start] = 1;
      collected.push_back(start);
      frontier.push_back(start);
      continue;
    }
    const int node = frontier.front();
    frontier.pop_front();
    for (int next : graph.adjacency.neighbors(node)) {
      if (visited[next]) continue;
      visited[next] = 1;
      collected.push_back(next);
      frontier.push_back(next);
      if (collected.size() == want) break;
    }
  }

  SnowballSplit split;
  split.test_nodes = collected;
  std::sort(split.test_nodes.begin(), split.test_nodes.end());
  split.train_nodes.reserve(n - want);
  for (int i = 0; i < n; ++i)
    if (!visited[i]) split.train_nodes.push_back(i);
  split.train = induced_subgraph(graph, split.train_nodes);
  split.test = induced_subgraph(graph, split.test_nodes);
  return split;
}

std::vector<int> choose_deleted_columns(int dim, double fraction,
                                        std::uint64_t seed) {
  if (fraction < 0.0 || fraction >= 1.0)
    throw std::invalid_argument("fraction must be in [0, 1)");
  const auto remove = static_cast<int>(std::floor(fraction * dim));
  std::vector<int> order(dim);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int i = dim - 1; i > 0; --i)
    std::swap(order[i], order[rng.uniform_int(i + 1)]);
  order.resize(remove);
  std::sort(order.begin(), order.end());
  return order;
}

AttributedGraph delete_feature_columns(const AttributedGraph& graph,
                                       double fraction, std::uint64_t seed) {
  const int d = graph.feature_dim();
  const auto deleted = choose_deleted_columns(d, fraction, seed);
  const int kept = d - static_cast<int>(deleted.size());
  if (kept == 0) throw std::runtime_error("feature deletion leaves 0 columns");

  std::vector<char> drop(d, 0);
  for (int j : deleted) drop[j] = 1;

  AttributedGraph out;
  out.adjacency = graph.adjacency;
  out.labels = graph.labels;
  out.features.values =
      Matrix(graph.features.values.rows(), static_cast<std::size_t>(kept));
  for (std::size_t i = 0; i < graph.features.values.rows(); ++i) {
    auto src = graph.features.values.row(i);
    auto dst = out.features.values.row(i);
    std::size_t w = 0;
    for (int j = 0; j < d; ++j)
      if (!drop[j]) dst[w++] = src[j];
  }
  if (!graph.features.column_names.empty()) {
    out.features.column_names.reserve(kept);
    for (int j = 0; j < d; ++j)
      if (!drop[j])
        out.features.column_names.push_back(graph.features.column_names[j]);
  }
  return out;
}

}  // namespace rcc
