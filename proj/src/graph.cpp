#include "rcc/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rcc {

AdjacencyStructure AdjacencyStructure::from_edges(
    int node_count, const std::vector<std::pair<int, int>>& edges) {
  if (node_count < 0) throw std::invalid_argument("negative node count");
  AdjacencyStructure adj;
  adj.n_ = node_count;
  adj.lists_.assign(static_cast<std::size_t>(node_count), {});
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= node_count || b < 0 || b >= node_count)
      throw std::invalid_argument("edge endpoint out of range: (" +
                                  std::to_string(a) + ", " +
                                  std::to_string(b) + ")");
    if (a == b) continue;
    adj.lists_[a].push_back(b);
    adj.lists_[b].push_back(a);
  }
  for (auto& list : adj.lists_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    adj.edge_count_ += list.size();
  }
  adj.edge_count_ /= 2;
  return adj;
}

bool AdjacencyStructure::has_edge(int a, int b) const {
  const auto& list = lists_[a];
  return std::binary_search(list.begin(), list.end(), b);
}

std::vector<std::pair<int, int>> AdjacencyStructure::edge_list() const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(edge_count_);
  for (int i = 0; i < n_; ++i)
    for (int j : lists_[i])
      if (i < j) edges.emplace_back(i, j);
  return edges;
}

void AdjacencyStructure::validate() const {
  if (static_cast<int>(lists_.size()) != n_)
    throw std::logic_error("adjacency list count != n");
  for (int i = 0; i < n_; ++i) {
    const auto& list = lists_[i];
    for (std::size_t p = 0; p < list.size(); ++p) {
      const int j = list[p];
      if (j < 0 || j >= n_) throw std::logic_error("neighbor index out of range");
      if (j == i) throw std::logic_error("self-loop");
      if (p > 0 && list[p - 1] >= j)
        throw std::logic_error("neighbor list not sorted/unique");
      if (!has_edge(j, i))
        throw std::logic_error("adjacency not symmetric");
    }
  }
}

LabelVector::LabelVector(std::vector<int> values, int num_classes,
                         std::vector<std::string> class_names)
    : values_(std::move(values)),
      k_(num_classes),
      class_names_(std::move(class_names)) {
  if (k_ < 2) throw std::invalid_argument("label space needs k >= 2");
  for (int y : values_)
    if (y < 0 || y >= k_)
      throw std::invalid_argument("label outside [0, k)");
}

LabelVector::LabelVector(const LabelVector& other)
    : values_(other.values_), k_(other.k_), class_names_(other.class_names_) {}

LabelVector& LabelVector::operator=(const LabelVector& other) {
  values_ = other.values_;
  k_ = other.k_;
  class_names_ = other.class_names_;
  return *this;
}

LabelVector::LabelVector(LabelVector&& other) noexcept
    : values_(std::move(other.values_)),
      k_(other.k_),
      class_names_(std::move(other.class_names_)) {}

LabelVector& LabelVector::operator=(LabelVector&& other) noexcept {
  values_ = std::move(other.values_);
  k_ = other.k_;
  class_names_ = std::move(other.class_names_);
  return *this;
}

Matrix LabelVector::to_one_hot() const {
  Matrix hot(values_.size(), static_cast<std::size_t>(k_));
  for (std::size_t i = 0; i < values_.size(); ++i)
    hot(i, static_cast<std::size_t>((*this)[static_cast<int>(i)])) = 1.0;
  return hot;
}

void AttributedGraph::validate() const {
  adjacency.validate();
  if (features.node_count() != adjacency.node_count())
    throw std::logic_error("feature row count != node count");
  if (!features.values.all_finite())
    throw std::logic_error("non-finite feature value");
  if (!features.column_names.empty() &&
      static_cast<int>(features.column_names.size()) != features.dim())
    throw std::logic_error("column name count != feature dim");
  if (labels && labels->size() != adjacency.node_count())
    throw std::logic_error("label count != node count");
}

}  // namespace rcc
