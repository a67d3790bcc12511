#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "rcc/classifier.hpp"
#include "rcc/graph.hpp"
#include "rcc/inference.hpp"
#include "rcc/relational.hpp"

namespace rcc {

struct TrainConfig {
  int unroll_iterations = 10;   // T
  double learning_rate = 0.1;   // eta
  int iterations = 500;         // optimizer steps
  double lambda = 1e-3;         // L2 strength, bias row exempt
  std::uint64_t seed = 0;
  double adagrad_epsilon = 1e-8;
};

/// Back-propagates the final-step loss gradient through the unrolled
/// prediction loop. Only per-edge k x k Jacobian blocks are formed:
/// delta_j(t-1) = sum over edges (i,j) of delta_i(t) f'(p_i(t)) g'_ij(t).
/// Returns deltas in chronological order, deltas[t-1] = dL/dP(t) for t = 1..T.
std::vector<Matrix> rcc_backprop(const UnrollTrace& trace,
                                 const Matrix& delta_final,
                                 const AttributedGraph& graph,
                                 const ClassifierSpec& f,
                                 const AggregatorSpec& g,
                                 const ParamMatrix& params);

/// Accumulates the per-step parameter gradients over all unroll steps and
/// adds lambda * Theta off the bias row.
Matrix rcc_parameter_gradient(const UnrollTrace& trace,
                              const std::vector<Matrix>& deltas,
                              const AttributedGraph& graph,
                              const ClassifierSpec& f, const AggregatorSpec& g,
                              const ParamMatrix& params, double lambda);

struct ObjectiveEval {
  double loss = 0.0;
  Matrix gradient;  // ParamMatrix::theta shape
};

using ObjectiveFn = std::function<ObjectiveEval(const ParamMatrix&)>;

struct FitResult {
  ParamMatrix params;
  std::vector<double> loss_history;  // objective value at each step
};

/// Adagrad from Theta = 0: per-coordinate steps eta * g / (eps + sqrt(sum
/// of squared past gradients)). Aborts with a diagnostic on non-finite loss.
FitResult adagrad_fit(int feature_dim, int num_classes,
                      const TrainConfig& config, const ObjectiveFn& objective);

/// The regularized training objective: node-averaged cross-entropy of the
/// zero-initialized unrolled prediction plus (lambda/2)||Theta||^2 (bias row
/// exempt), with its exact gradient via rcc_backprop.
ObjectiveEval rcc_objective(const AttributedGraph& graph,
                            const ClassifierSpec& f, const AggregatorSpec& g,
                            const ParamMatrix& params, int unroll_iterations,
                            double lambda);

/// Unrolled cross-entropy alone (zero init, no regularizer).
double rcc_unrolled_loss(const AttributedGraph& graph, const ClassifierSpec& f,
                         const AggregatorSpec& g, const ParamMatrix& params,
                         int unroll_iterations);

/// Trains by back-propagation through the prediction loop.
FitResult train_rcc(const AttributedGraph& graph, const ClassifierSpec& f,
                    const AggregatorSpec& g, const TrainConfig& config);

/// Classical baseline: relational features computed once from one-hot true
/// labels, then a plain classifier fit on the fixed inputs (no unrolling).
FitResult train_ica_baseline(const AttributedGraph& graph,
                             const ClassifierSpec& f, const AggregatorSpec& g,
                             const TrainConfig& config);

/// Local-only baseline: classifier fit with zero relational input.
FitResult train_local(const AttributedGraph& graph, const ClassifierSpec& f,
                      const TrainConfig& config);

/// Certifies the analytic RCC gradient against central finite differences of
/// the unrolled loss; returns max over coordinates of
/// |analytic - numeric| / max(1, |numeric|).
double finite_difference_check(const AttributedGraph& graph,
                               const ClassifierSpec& f, const AggregatorSpec& g,
                               const ParamMatrix& params, int unroll_iterations,
                               double step = 1e-6);

/// The unrolled loss along the segment theta_a + alpha (theta_b - theta_a),
/// one (alpha, loss) pair per requested alpha.
std::vector<std::pair<double, double>> loss_cross_section(
    const ParamMatrix& theta_a, const ParamMatrix& theta_b,
    const std::vector<double>& alphas, const AttributedGraph& graph,
    const ClassifierSpec& f, const AggregatorSpec& g, int unroll_iterations);

}  // namespace rcc
