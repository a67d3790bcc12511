#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rcc/graph.hpp"

namespace rcc {

struct CitationLoadResult {
  AttributedGraph graph;
  int dropped_edges = 0;       // cites lines referencing unknown node ids
  int non_binary_values = 0;   // feature entries outside {0, 1}
};

/// Loads a citation network from a tab-separated content file
/// (`node_id <TAB> f_1..f_d <TAB> label`) and a cites file
/// (`cited <TAB> citing`). Edges are symmetrized, labels are indexed by
/// first appearance, edges to unknown ids are dropped and counted.
/// Throws std::runtime_error with a line number on malformed input.
CitationLoadResult load_citation_dataset(const std::string& content_path,
                                         const std::string& cites_path);

struct SyntheticGraphConfig {
  int nodes = 400;
  int num_classes = 3;
  int feature_dim = 10;
  double homophily = 0.9;   // probability an edge joins same-label endpoints
  double signal = 0.5;      // feature informativeness in [0, 1]
  double avg_degree = 8.0;
  std::uint64_t seed = 0;
};

/// Planted-homophily random graph: uniform labels, floor(n*avg_degree/2)
/// distinct edges, each same-label with probability `homophily` and a
/// uniform distinct-label pair otherwise. Features are class-conditional
/// Gaussians whose means sit on a simplex scaled by `signal`; signal = 0
/// makes features independent of labels. Deterministic given the seed.
AttributedGraph generate_synthetic_homophily_graph(
    const SyntheticGraphConfig& config);

struct SnowballSplit {
  AttributedGraph train;
  AttributedGraph test;
  std::vector<int> train_nodes;  // original indices, ascending
  std::vector<int> test_nodes;
};

/// Breadth-first snowball sampling of ceil(n*test_fraction) nodes (restarting
/// from a random unvisited node when the frontier empties); the collected set
/// becomes the test subgraph, the rest the train subgraph. Cross-split edges
/// are dropped.
SnowballSplit snowball_split(const AttributedGraph& graph,
                             double test_fraction, std::uint64_t seed);

/// The set of columns delete_feature_columns removes for a given dimension,
/// fraction, and seed: floor(fraction*d) indices, ascending.
std::vector<int> choose_deleted_columns(int dim, double fraction,
                                        std::uint64_t seed);

/// Removes a random floor(fraction*d)-column subset globally. The choice
/// depends only on (d, fraction, seed), so train and test graphs passed the
/// same seed lose the same columns. Errors if no columns would remain.
AttributedGraph delete_feature_columns(const AttributedGraph& graph,
                                       double fraction, std::uint64_t seed);

}  // namespace rcc
