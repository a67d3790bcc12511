#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rcc/matrix.hpp"

namespace rcc {

/// Sparse symmetric 0/1 graph stored as sorted per-node neighbor lists.
/// No self-loops, no duplicate edges, all indices in [0, n).
class AdjacencyStructure {
 public:
  AdjacencyStructure() = default;

  /// Builds from an arbitrary edge list: direction is discarded, duplicates
  /// collapse, self-loops are dropped. Throws on indices outside [0, n).
  static AdjacencyStructure from_edges(
      int node_count, const std::vector<std::pair<int, int>>& edges);

  int node_count() const { return n_; }
  int degree(int node) const { return static_cast<int>(lists_[node].size()); }
  const std::vector<int>& neighbors(int node) const { return lists_[node]; }
  bool has_edge(int a, int b) const;

  /// Number of undirected edges.
  std::size_t edge_count() const { return edge_count_; }

  std::vector<std::pair<int, int>> edge_list() const;

  /// Full-scan invariant check: symmetry, sortedness, no duplicates,
  /// no self-loops, index bounds. Throws std::logic_error on violation.
  void validate() const;

 private:
  int n_ = 0;
  std::vector<std::vector<int>> lists_;
  std::size_t edge_count_ = 0;
};

/// Per-node class indices in [0, k). Element reads are counted so the
/// experiment harness can prove that evaluation never touches labels.
class LabelVector {
 public:
  LabelVector() = default;
  LabelVector(std::vector<int> values, int num_classes,
              std::vector<std::string> class_names = {});

  LabelVector(const LabelVector& other);
  LabelVector& operator=(const LabelVector& other);
  LabelVector(LabelVector&& other) noexcept;
  LabelVector& operator=(LabelVector&& other) noexcept;

  int size() const { return static_cast<int>(values_.size()); }
  int num_classes() const { return k_; }
  const std::vector<std::string>& class_names() const { return class_names_; }

  int operator[](int i) const {
    reads_.fetch_add(1, std::memory_order_relaxed);
    return values_[i];
  }

  /// n×k one-hot encoding; counts one read per node.
  Matrix to_one_hot() const;

  /// Uninstrumented access for dataset plumbing (splits, serialization).
  const std::vector<int>& raw_values() const { return values_; }

  std::uint64_t read_count() const {
    return reads_.load(std::memory_order_relaxed);
  }
  void reset_read_count() const {
    reads_.store(0, std::memory_order_relaxed);
  }

 private:
  std::vector<int> values_;
  int k_ = 0;
  std::vector<std::string> class_names_;
  mutable std::atomic<std::uint64_t> reads_{0};
};

/// n×d local feature matrix with optional column identifiers.
struct NodeFeatures {
  Matrix values;
  std::vector<std::string> column_names;

  int node_count() const { return static_cast<int>(values.rows()); }
  int dim() const { return static_cast<int>(values.cols()); }
};

/// A graph decorated with local features and (when known) labels.
struct AttributedGraph {
  AdjacencyStructure adjacency;
  NodeFeatures features;
  std::optional<LabelVector> labels;

  int node_count() const { return adjacency.node_count(); }
  int feature_dim() const { return features.dim(); }
  int num_classes() const { return labels ? labels->num_classes() : 0; }

  /// Cross-component consistency check; throws std::logic_error on failure.
  void validate() const;
};

}  // namespace rcc
