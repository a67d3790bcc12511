#include <cmath>
#include <vector>

#include "doctest.h"
#include "rcc/relational.hpp"
#include "support/builders.hpp"
#include "support/finite_diff.hpp"

using rcc::aggregate;
using rcc::aggregator_jacobian_block;
using rcc::AggregatorKind;
using rcc::AggregatorSpec;
using rcc::AdjacencyStructure;
using rcc::Matrix;
using testsupport::fd_jacobian;
using testsupport::max_rel_err;

namespace {

const AggregatorSpec kSum{AggregatorKind::kSum, 0.5};
const AggregatorSpec kProportion{AggregatorKind::kProportion, 0.5};
const AggregatorSpec kMode{AggregatorKind::kMode, 0.5};

// star: node 0 joined to 1..4, node 5 isolated
AdjacencyStructure star() {
  return AdjacencyStructure::from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
}

}  // namespace

TEST_CASE("aggregate: sums, proportions, and the degree-0 convention") {
  const auto adj = star();

  const Matrix zeros(6, 3);
  const auto zero_sum = aggregate(kSum, zeros, adj);
  for (double v : zero_sum.data()) CHECK(v == 0.0);

  Matrix p(6, 2);
  p(1, 0) = 1.0;  // one-hot neighbors of node 0
  p(2, 1) = 1.0;
  const auto prop = aggregate(kProportion, p, adj);
  CHECK(prop(0, 0) == doctest::Approx(0.25));
  CHECK(prop(0, 1) == doctest::Approx(0.25));

  for (const auto& spec : {kSum, kProportion, kMode}) {
    const auto r = aggregate(spec, testsupport::random_predictions(6, 3, 1), adj);
    for (std::size_t c = 0; c < 3; ++c) CHECK(r(5, c) == 0.0);  // isolated
  }
}

TEST_CASE("aggregate: two one-hot neighbors average to (0.5, 0.5)") {
  const auto adj = AdjacencyStructure::from_edges(3, {{0, 1}, {0, 2}});
  Matrix p(3, 2);
  p(1, 0) = 1.0;
  p(2, 1) = 1.0;
  const auto r = aggregate(kProportion, p, adj);
  CHECK(r(0, 0) == doctest::Approx(0.5));
  CHECK(r(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("aggregate: cold mode approaches the argmax of the sum") {
  const auto adj = AdjacencyStructure::from_edges(3, {{0, 1}, {0, 2}});
  Matrix p(3, 2);
  p(1, 0) = 1.0;  // neighbor sum at node 0 is (2, 1)
  p(1, 1) = 0.5;
  p(2, 0) = 1.0;
  p(2, 1) = 0.5;
  const AggregatorSpec cold{AggregatorKind::kMode, 1e-3};
  const auto r = aggregate(cold, p, adj);
  CHECK(r(0, 0) > 1.0 - 1e-9);
  CHECK(r(0, 1) < 1e-9);
}

TEST_CASE("aggregate properties: linearity, convexity, stochastic mode rows") {
  const auto graph = testsupport::small_synthetic(20, 3, 3, 8);
  const auto& adj = graph.adjacency;
  const auto p = testsupport::random_matrix(20, 3, 2);
  const auto q = testsupport::random_matrix(20, 3, 3);

  // sum is linear
  Matrix combo(20, 3);
  for (std::size_t idx = 0; idx < combo.data().size(); ++idx)
    combo.data()[idx] = 2.0 * p.data()[idx] - 0.5 * q.data()[idx];
  auto lhs = aggregate(kSum, combo, adj);
  auto rp = aggregate(kSum, p, adj);
  auto rq = aggregate(kSum, q, adj);
  for (std::size_t idx = 0; idx < lhs.data().size(); ++idx)
    CHECK(lhs.data()[idx] ==
          doctest::Approx(2.0 * rp.data()[idx] - 0.5 * rq.data()[idx]));

  // proportion rows are convex combinations of neighbor rows
  const auto pred = testsupport::random_predictions(20, 3, 4);
  const auto prop = aggregate(kProportion, pred, adj);
  for (int i = 0; i < 20; ++i) {
    if (adj.degree(i) == 0) continue;
    for (std::size_t c = 0; c < 3; ++c) {
      double lo = 1e30, hi = -1e30;
      for (int j : adj.neighbors(i)) {
        lo = std::min(lo, pred(j, c));
        hi = std::max(hi, pred(j, c));
      }
      CHECK(prop(i, c) >= lo - 1e-12);
      CHECK(prop(i, c) <= hi + 1e-12);
    }
  }

  // mode rows of non-isolated nodes are stochastic
  const auto mode = aggregate(kMode, pred, adj);
  for (int i = 0; i < 20; ++i) {
    if (adj.degree(i) == 0) continue;
    double total = 0.0;
    for (std::size_t c = 0; c < 3; ++c) total += mode(i, c);
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("jacobian blocks: closed forms and the non-edge guard") {
  const auto adj = star();
  const auto pred = testsupport::random_predictions(6, 3, 5);

  const auto r_sum = aggregate(kSum, pred, adj);
  const auto sum_block = aggregator_jacobian_block(kSum, 0, 1, adj, r_sum.row(0));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      CHECK(sum_block(a, b) == (a == b ? 1.0 : 0.0));

  const auto r_prop = aggregate(kProportion, pred, adj);
  const auto prop_block =
      aggregator_jacobian_block(kProportion, 0, 3, adj, r_prop.row(0));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      CHECK(prop_block(a, b) == (a == b ? 0.25 : 0.0));

  CHECK_THROWS_AS(aggregator_jacobian_block(kSum, 1, 2, adj, r_sum.row(1)),
                  std::logic_error);
  CHECK_THROWS_AS(aggregator_jacobian_block(kSum, 5, 0, adj, r_sum.row(5)),
                  std::logic_error);
}

TEST_CASE("jacobian blocks match a dense finite-difference jacobian") {
  // n <= 8 graphs: compare every (i, j) block of the aggregate map against
  // central differences, including the zero blocks off edges.
  const int n = 7, k = 3;
  const auto graph = testsupport::small_synthetic(n, 2, k, 11, 3.0);
  const auto& adj = graph.adjacency;
  const auto pred = testsupport::random_predictions(n, k, 6);

  for (const auto& spec : {kSum, kProportion, kMode}) {
    const auto flatten = [&](const std::vector<double>& flat) {
      Matrix p(n, k);
      p.data() = flat;
      const auto r = aggregate(spec, p, adj);
      return std::vector<double>(r.data());
    };
    const auto dense = fd_jacobian(flatten, pred.data(), 1e-6);

    const auto r = aggregate(spec, pred, adj);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Matrix block(k, k);
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b)
            block(a, b) = dense(i * k + a, j * k + b);
        if (adj.has_edge(i, j)) {
          const auto analytic =
              aggregator_jacobian_block(spec, i, j, adj, r.row(i));
          CHECK(max_rel_err(analytic, block) < 1e-5);
        } else {
          for (double v : block.data()) CHECK(std::abs(v) < 1e-7);
        }
      }
  }
}
