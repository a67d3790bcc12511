#pragma once

#include <vector>

#include "rcc/classifier.hpp"
#include "rcc/graph.hpp"
#include "rcc/inference.hpp"
#include "rcc/relational.hpp"

// Dense full-matrix chain-rule oracle for back-propagation through the
// prediction loop. Builds the nk x nk Jacobians dP(t)/dR(t) (block diagonal)
// and dR(t)/dP(t-1) (block sparse in the adjacency pattern) with its own
// derivative formulas and multiplies them out, flattening matrices to
// node-major vectors. Cubic cost, usable only on tiny graphs.
namespace testsupport {

using rcc::AggregatorKind;
using rcc::AggregatorSpec;
using rcc::AttributedGraph;
using rcc::ClassifierKind;
using rcc::ClassifierSpec;
using rcc::Matrix;
using rcc::ParamMatrix;
using rcc::UnrollTrace;

/// dp_a/ds_c of the activation, written independently of the library code.
inline Matrix dense_activation_jacobian(const ClassifierSpec& f,
                                        std::span<const double> p) {
  const std::size_t k = p.size();
  Matrix jac(k, k);
  if (f.kind == ClassifierKind::kSigmoid) {
    for (std::size_t a = 0; a < k; ++a) jac(a, a) = p[a] * (1.0 - p[a]);
  } else {
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t c = 0; c < k; ++c)
        jac(a, c) = (p[a] * ((a == c) ? 1.0 : 0.0) - p[a] * p[c]) /
                    f.temperature;
  }
  return jac;
}

/// Block-diagonal dP(t)/dR(t) as a dense nk x nk matrix.
inline Matrix dense_classifier_jacobian(const ClassifierSpec& f,
                                        const Matrix& predictions,
                                        const ParamMatrix& params) {
  const std::size_t n = predictions.rows();
  const std::size_t k = predictions.cols();
  Matrix big(n * k, n * k);
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix act = dense_activation_jacobian(f, predictions.row(i));
    // dp_a/dr_b = sum_c act(a, c) * Theta_r[b, c]
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        double acc = 0.0;
        for (std::size_t c = 0; c < k; ++c)
          acc += act(a, c) *
                 params.theta(static_cast<std::size_t>(params.feature_dim) + 1 +
                                  b,
                              c);
        big(i * k + a, i * k + b) = acc;
      }
  }
  return big;
}

/// Block-sparse dR(t)/dP(t-1) as a dense nk x nk matrix.
inline Matrix dense_aggregator_jacobian(const AggregatorSpec& g,
                                        const Matrix& relationals,
                                        const AttributedGraph& graph) {
  const std::size_t n = relationals.rows();
  const std::size_t k = relationals.cols();
  Matrix big(n * k, n * k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& neighbors = graph.adjacency.neighbors(static_cast<int>(i));
    for (int j : neighbors) {
      const auto ju = static_cast<std::size_t>(j);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
          double value = 0.0;
          switch (g.kind) {
            case AggregatorKind::kSum:
              value = (a == b) ? 1.0 : 0.0;
              break;
            case AggregatorKind::kProportion:
              value = (a == b) ? 1.0 / neighbors.size() : 0.0;
              break;
            case AggregatorKind::kMode: {
              auto r = relationals.row(i);
              value = (r[a] * ((a == b) ? 1.0 : 0.0) - r[a] * r[b]) /
                      g.temperature;
              break;
            }
          }
          big(i * k + a, ju * k + b) = value;
        }
    }
  }
  return big;
}

/// Full-matrix back-propagation: delta(t-1) = delta(t) dP/dR dR/dP.
/// Returns deltas in chronological order, matching rcc_backprop.
inline std::vector<Matrix> dense_backprop(const UnrollTrace& trace,
                                          const Matrix& delta_final,
                                          const AttributedGraph& graph,
                                          const ClassifierSpec& f,
                                          const AggregatorSpec& g,
                                          const ParamMatrix& params) {
  const int steps = trace.steps();
  const std::size_t n = delta_final.rows();
  const std::size_t k = delta_final.cols();
  const std::size_t nk = n * k;

  std::vector<Matrix> deltas(steps);
  deltas[steps - 1] = delta_final;
  for (int t = steps; t >= 2; --t) {
    const Matrix big_f =
        dense_classifier_jacobian(f, trace.predictions[t], params);
    const Matrix big_g =
        dense_aggregator_jacobian(g, trace.relationals[t - 1], graph);

    std::vector<double> flat(nk);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < k; ++a)
        flat[i * k + a] = deltas[t - 1](i, a);

    std::vector<double> mid(nk, 0.0), prev(nk, 0.0);
    for (std::size_t col = 0; col < nk; ++col)
      for (std::size_t row = 0; row < nk; ++row)
        mid[col] += flat[row] * big_f(row, col);
    for (std::size_t col = 0; col < nk; ++col)
      for (std::size_t row = 0; row < nk; ++row)
        prev[col] += mid[row] * big_g(row, col);

    Matrix delta_prev(n, k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < k; ++a)
        delta_prev(i, a) = prev[i * k + a];
    deltas[t - 2] = std::move(delta_prev);
  }
  return deltas;
}

}  // namespace testsupport
