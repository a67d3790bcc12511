#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "doctest.h"
#include "rcc/dataset.hpp"
#include "support/builders.hpp"

using rcc::AttributedGraph;
using rcc::load_citation_dataset;
using rcc::snowball_split;
using rcc::SyntheticGraphConfig;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("rcc_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name, const std::string& body) const {
    const auto full = path / name;
    std::ofstream out(full);
    out << body;
    return full.string();
  }
  static inline int counter = 0;
};

bool graphs_equal(const AttributedGraph& a, const AttributedGraph& b) {
  if (a.node_count() != b.node_count()) return false;
  for (int i = 0; i < a.node_count(); ++i)
    if (a.adjacency.neighbors(i) != b.adjacency.neighbors(i)) return false;
  if (!(a.features.values == b.features.values)) return false;
  return a.labels->raw_values() == b.labels->raw_values();
}

}  // namespace

TEST_CASE("citation loader: three isolated nodes") {
  TempDir dir;
  const auto content = dir.file("g.content",
                                "n1\t0\t1\tml\n"
                                "n2\t1\t0\ttheory\n"
                                "n3\t0\t0\tml\n");
  const auto cites = dir.file("g.cites", "");
  const auto result = load_citation_dataset(content, cites);
  CHECK(result.graph.node_count() == 3);
  CHECK(result.graph.adjacency.edge_count() == 0);
  for (int i = 0; i < 3; ++i) CHECK(result.graph.adjacency.degree(i) == 0);
  CHECK(result.graph.feature_dim() == 2);
  CHECK(result.graph.num_classes() == 2);
  // first-appearance label order
  CHECK(result.graph.labels->class_names() ==
        std::vector<std::string>{"ml", "theory"});
  CHECK(result.graph.labels->raw_values() == std::vector<int>{0, 1, 0});
}

TEST_CASE("citation loader: symmetrized edges, dropped unknowns, warnings") {
  TempDir dir;
  const auto content = dir.file("g.content",
                                "a\t1\t0\tx\n"
                                "b\t0\t2\ty\n"
                                "c\t1\t1\tx\n");
  const auto cites = dir.file("g.cites",
                              "a\tb\n"
                              "b\ta\n"
                              "ghost\ta\n"
                              "c\tghost\n"
                              "b\tc\n");
  const auto result = load_citation_dataset(content, cites);
  CHECK(result.graph.adjacency.edge_count() == 2);
  CHECK(result.graph.adjacency.has_edge(0, 1));
  CHECK(result.graph.adjacency.has_edge(1, 2));
  CHECK(result.dropped_edges == 2);
  CHECK(result.non_binary_values == 1);  // the value 2
  result.graph.validate();
}

TEST_CASE("citation loader: malformed lines carry line numbers") {
  TempDir dir;
  const auto content = dir.file("g.content",
                                "a\t1\t0\tx\n"
                                "b\t0\tnotanumber\ty\n");
  const auto cites = dir.file("g.cites", "");
  CHECK_THROWS_WITH_AS(load_citation_dataset(content, cites),
                       doctest::Contains(":2"), std::runtime_error);

  const auto short_line = dir.file("h.content", "a\t1\n");
  CHECK_THROWS_WITH_AS(load_citation_dataset(short_line, cites),
                       doctest::Contains(":1"), std::runtime_error);

  const auto bad_cites = dir.file("i.cites", "a\n");
  const auto ok_content = dir.file("i.content", "a\t1\tx\nb\t0\ty\n");
  CHECK_THROWS_WITH_AS(load_citation_dataset(ok_content, bad_cites),
                       doctest::Contains(":1"), std::runtime_error);
}

TEST_CASE("synthetic generator: homophily 1 forces same-label edges") {
  SyntheticGraphConfig config;
  config.nodes = 200;
  config.num_classes = 3;
  config.feature_dim = 6;
  config.homophily = 1.0;
  config.signal = 0.4;
  config.avg_degree = 6.0;
  config.seed = 7;
  const auto graph = rcc::generate_synthetic_homophily_graph(config);
  CHECK(graph.adjacency.edge_count() == 600);
  const auto& y = graph.labels->raw_values();
  for (const auto& [a, b] : graph.adjacency.edge_list()) CHECK(y[a] == y[b]);
  graph.validate();
}

TEST_CASE("synthetic generator: seeded runs are identical") {
  SyntheticGraphConfig config;
  config.nodes = 200;
  config.num_classes = 3;
  config.homophily = 0.9;
  config.seed = 7;
  const auto a = rcc::generate_synthetic_homophily_graph(config);
  const auto b = rcc::generate_synthetic_homophily_graph(config);
  CHECK(graphs_equal(a, b));
}

TEST_CASE("synthetic generator: signal 0 decouples features from labels") {
  SyntheticGraphConfig config;
  config.nodes = 3000;
  config.num_classes = 3;
  config.feature_dim = 3;
  config.signal = 0.0;
  config.seed = 11;
  const auto graph = rcc::generate_synthetic_homophily_graph(config);
  const auto& y = graph.labels->raw_values();
  for (int j = 0; j < 3; ++j) {
    double mean[3] = {0, 0, 0};
    int count[3] = {0, 0, 0};
    for (int i = 0; i < graph.node_count(); ++i) {
      mean[y[i]] += graph.features.values(i, j);
      ++count[y[i]];
    }
    for (int c = 0; c < 3; ++c) {
      REQUIRE(count[c] > 100);
      // noise sd 0.5 over ~1000 samples: class means stay near zero
      CHECK(std::abs(mean[c] / count[c]) < 0.1);
    }
  }
}

TEST_CASE("synthetic generator: impossible degree errors out") {
  SyntheticGraphConfig config;
  config.nodes = 10;
  config.num_classes = 2;
  config.avg_degree = 20.0;  // wants 100 edges, only 45 exist
  CHECK_THROWS_AS(rcc::generate_synthetic_homophily_graph(config),
                  std::runtime_error);
}

TEST_CASE("snowball split: sizes, determinism, partition") {
  const auto graph = testsupport::small_synthetic(100, 4, 3, 5);
  const auto split = snowball_split(graph, 0.2, 9);
  CHECK(split.test.node_count() == 20);
  CHECK(split.train.node_count() == 80);

  const auto again = snowball_split(graph, 0.2, 9);
  CHECK(again.test_nodes == split.test_nodes);
  CHECK(graphs_equal(again.train, split.train));

  std::set<int> all(split.train_nodes.begin(), split.train_nodes.end());
  for (int v : split.test_nodes) CHECK(all.insert(v).second);
  CHECK(static_cast<int>(all.size()) == graph.node_count());

  // every output edge is an input edge with both endpoints inside the part
  for (const auto& [a, b] : split.train.adjacency.edge_list())
    CHECK(graph.adjacency.has_edge(split.train_nodes[a], split.train_nodes[b]));
  for (const auto& [a, b] : split.test.adjacency.edge_list())
    CHECK(graph.adjacency.has_edge(split.test_nodes[a], split.test_nodes[b]));
  split.train.validate();
  split.test.validate();
}

TEST_CASE("snowball split: BFS order is forced on a path graph") {
  const auto graph = testsupport::path_graph(5, 2, 2, 3);
  // find a seed whose first pick starts the crawl at node 0 or 1; both give
  // test = {0, 1} and leave the path 2-3-4 as the train side
  bool found = false;
  for (std::uint64_t seed = 0; seed < 64 && !found; ++seed) {
    const auto split = snowball_split(graph, 0.4, seed);
    if (split.test_nodes == std::vector<int>{0, 1}) {
      found = true;
      CHECK(split.train_nodes == std::vector<int>{2, 3, 4});
      CHECK(split.train.adjacency.edge_count() == 2);
      CHECK(split.train.adjacency.has_edge(0, 1));  // remapped 2-3
      CHECK(split.train.adjacency.has_edge(1, 2));  // remapped 3-4
      CHECK(split.test.adjacency.edge_count() == 1);
    }
  }
  CHECK(found);
}

TEST_CASE("citation loader matches published corpus shapes when available") {
  // runs only when RCC_CORA_DIR points at cora.content / cora.cites
  const char* dir = std::getenv("RCC_CORA_DIR");
  if (!dir) return;
  const auto result =
      load_citation_dataset(std::string(dir) + "/cora.content",
                            std::string(dir) + "/cora.cites");
  CHECK(result.graph.node_count() == 2708);
  CHECK(result.graph.num_classes() == 7);
  result.graph.validate();
}

TEST_CASE("feature deletion: arithmetic, identity, determinism") {
  const auto graph = testsupport::small_synthetic(30, 10, 3, 2);

  const auto same = rcc::delete_feature_columns(graph, 0.0, 4);
  CHECK(same.features.values == graph.features.values);

  const auto half = rcc::delete_feature_columns(graph, 0.5, 4);
  CHECK(half.feature_dim() == 5);
  CHECK(half.node_count() == graph.node_count());
  CHECK(half.adjacency.edge_count() == graph.adjacency.edge_count());
  CHECK(half.labels->raw_values() == graph.labels->raw_values());

  CHECK(rcc::choose_deleted_columns(10, 0.5, 4) ==
        rcc::choose_deleted_columns(10, 0.5, 4));
  CHECK(rcc::choose_deleted_columns(10, 0.5, 4).size() == 5);

  // fraction is capped below 1, so at least one column always survives
  CHECK_THROWS_AS(rcc::delete_feature_columns(graph, 1.0, 4),
                  std::invalid_argument);
  CHECK(rcc::delete_feature_columns(graph, 0.95, 4).feature_dim() == 1);
}
