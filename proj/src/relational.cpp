#include "rcc/relational.hpp"

#include <stdexcept>
#include <vector>

#include "rcc/classifier.hpp"

namespace rcc {

AggregatorKind aggregator_kind_from_string(const std::string& name) {
  if (name == "sum") return AggregatorKind::kSum;
  if (name == "proportion") return AggregatorKind::kProportion;
  if (name == "mode") return AggregatorKind::kMode;
  throw std::invalid_argument("unknown aggregator kind: " + name);
}

std::string to_string(AggregatorKind kind) {
  switch (kind) {
    case AggregatorKind::kSum: return "sum";
    case AggregatorKind::kProportion: return "proportion";
    default: return "mode";
  }
}

Matrix aggregate(const AggregatorSpec& spec, const Matrix& predictions,
                 const AdjacencyStructure& adjacency) {
  const auto n = static_cast<std::size_t>(adjacency.node_count());
  if (predictions.rows() != n)
    throw std::invalid_argument("prediction row count != node count");
  if (spec.kind == AggregatorKind::kMode && spec.temperature <= 0.0)
    throw std::invalid_argument("mode temperature must be positive");

  const std::size_t k = predictions.cols();
  Matrix rel(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& neighbors = adjacency.neighbors(static_cast<int>(i));
    if (neighbors.empty()) continue;  // degree-0 convention: zero row
    auto out = rel.row(i);
    for (int j : neighbors) {
      auto p = predictions.row(static_cast<std::size_t>(j));
      for (std::size_t c = 0; c < k; ++c) out[c] += p[c];
    }
    if (spec.kind == AggregatorKind::kProportion) {
      const double inv_deg = 1.0 / static_cast<double>(neighbors.size());
      for (std::size_t c = 0; c < k; ++c) out[c] *= inv_deg;
    } else if (spec.kind == AggregatorKind::kMode) {
      softmax_row(out, spec.temperature, out);
    }
  }
  return rel;
}

Matrix aggregator_jacobian_block(const AggregatorSpec& spec, int i, int j,
                                 const AdjacencyStructure& adjacency,
                                 std::span<const double> r_row) {
  if (!adjacency.has_edge(i, j))
    throw std::logic_error("aggregator Jacobian requested for a non-edge");
  const std::size_t k = r_row.size();
  Matrix jac(k, k);
  switch (spec.kind) {
    case AggregatorKind::kSum:
      for (std::size_t a = 0; a < k; ++a) jac(a, a) = 1.0;
      break;
    case AggregatorKind::kProportion: {
      const double inv_deg = 1.0 / static_cast<double>(adjacency.degree(i));
      for (std::size_t a = 0; a < k; ++a) jac(a, a) = inv_deg;
      break;
    }
    case AggregatorKind::kMode: {
      const double inv_tau = 1.0 / spec.temperature;
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
          jac(a, b) =
              inv_tau * r_row[a] * ((a == b ? 1.0 : 0.0) - r_row[b]);
      break;
    }
  }
  return jac;
}

}  // namespace rcc
