#pragma once

#include <span>
#include <string>

#include "rcc/graph.hpp"
#include "rcc/matrix.hpp"

namespace rcc {

enum class AggregatorKind { kSum, kProportion, kMode };

AggregatorKind aggregator_kind_from_string(const std::string& name);
std::string to_string(AggregatorKind kind);

struct AggregatorSpec {
  AggregatorKind kind = AggregatorKind::kProportion;
  double temperature = 0.5;  // mode only, > 0
};

/// Aggregates neighbor prediction rows into per-node relational features:
/// sum of neighbor rows, their proportion (degree-normalized sum), or the
/// soft mode (tempered softmax of the sum). Degree-0 nodes get a zero row
/// for every kind.
Matrix aggregate(const AggregatorSpec& spec, const Matrix& predictions,
                 const AdjacencyStructure& adjacency);

/// dr_i/dp_j for an edge (i, j), given node i's aggregate row r_i; k x k
/// with entry (a, b) = dr_ia/dp_jb. Blocks vanish off edges and are never
/// materialized; calling on a non-edge throws (it signals an indexing bug
/// in back-propagation).
Matrix aggregator_jacobian_block(const AggregatorSpec& spec, int i, int j,
                                 const AdjacencyStructure& adjacency,
                                 std::span<const double> r_row);

}  // namespace rcc
