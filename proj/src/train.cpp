#include "rcc/train.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rcc {
namespace {

const LabelVector& require_labels(const AttributedGraph& graph) {
  if (!graph.labels)
    throw std::invalid_argument("training requires a labeled graph");
  return *graph.labels;
}

InferenceConfig training_unroll(int iterations) {
  InferenceConfig config;
  config.iterations = iterations;
  config.init = PredictionInit::kZeros;  // gradient matches the executed loop
  config.early_stop = false;
  return config;
}

void add_l2(Matrix& grad, const ParamMatrix& params, double lambda) {
  if (lambda == 0.0) return;
  const auto bias = static_cast<std::size_t>(params.bias_row());
  for (std::size_t r = 0; r < grad.rows(); ++r) {
    if (r == bias) continue;
    for (std::size_t c = 0; c < grad.cols(); ++c)
      grad(r, c) += lambda * params.theta(r, c);
  }
}

double l2_penalty(const ParamMatrix& params, double lambda) {
  if (lambda == 0.0) return 0.0;
  const auto bias = static_cast<std::size_t>(params.bias_row());
  double sq = 0.0;
  for (std::size_t r = 0; r < params.theta.rows(); ++r) {
    if (r == bias) continue;
    for (std::size_t c = 0; c < params.theta.cols(); ++c)
      sq += params.theta(r, c) * params.theta(r, c);
  }
  return 0.5 * lambda * sq;
}

/// Fixed-input objective shared by the local and ICA-baseline trainers.
ObjectiveEval fixed_input_objective(const Matrix& features,
                                    const Matrix& relational,
                                    const LabelVector& labels,
                                    const ClassifierSpec& f,
                                    const ParamMatrix& params, double lambda) {
  const Matrix pred = classifier_forward(f, features, relational, params);
  LossGrad lg = cross_entropy_loss_and_grad(f.kind, pred, labels);
  ObjectiveEval eval;
  eval.loss = lg.loss + l2_penalty(params, lambda);
  eval.gradient =
      classifier_param_gradient(f, features, relational, pred, lg.delta);
  add_l2(eval.gradient, params, lambda);
  return eval;
}

}  // namespace

std::vector<Matrix> rcc_backprop(const UnrollTrace& trace,
                                 const Matrix& delta_final,
                                 const AttributedGraph& graph,
                                 const ClassifierSpec& f,
                                 const AggregatorSpec& g,
                                 const ParamMatrix& params) {
  const int steps = trace.steps();
  if (steps < 1 || trace.predictions.size() != trace.relationals.size() + 1)
    throw std::invalid_argument("inconsistent unroll trace");
  const auto n = static_cast<std::size_t>(graph.node_count());
  const auto k = static_cast<std::size_t>(params.num_classes);
  if (delta_final.rows() != n || delta_final.cols() != k)
    throw std::invalid_argument("final delta shape mismatch");
  for (const Matrix& p : trace.predictions)
    if (p.rows() != n || p.cols() != k)
      throw std::invalid_argument("trace shape mismatch");

  std::vector<Matrix> deltas(steps);
  deltas[steps - 1] = delta_final;

  const double inv_f_tau = 1.0 / f.temperature;
  std::vector<double> score_grad(k);  // delta_i(t) . dp_i(t)/ds_i(t)
  std::vector<double> routed(k);      // delta_i(t) . dp_i(t)/dr_i(t)
  std::vector<double> through(k);
  for (int t = steps; t >= 2; --t) {
    const Matrix& delta_t = deltas[t - 1];
    const Matrix& pred_t = trace.predictions[t];        // P(t)
    const Matrix& rel_t = trace.relationals[t - 1];     // R(t)
    Matrix delta_prev(n, k);

    for (std::size_t i = 0; i < n; ++i) {
      const auto& neighbors =
          graph.adjacency.neighbors(static_cast<int>(i));
      if (neighbors.empty()) continue;

      // delta_i . f'(r_i) evaluated through the activation structure,
      // avoiding a materialized k x k Jacobian per node
      auto di = delta_t.row(i);
      auto pi = pred_t.row(i);
      if (f.kind == ClassifierKind::kSigmoid) {
        for (std::size_t c = 0; c < k; ++c)
          score_grad[c] = di[c] * pi[c] * (1.0 - pi[c]);
      } else {
        double dot = 0.0;
        for (std::size_t c = 0; c < k; ++c) dot += di[c] * pi[c];
        for (std::size_t c = 0; c < k; ++c)
          score_grad[c] = inv_f_tau * pi[c] * (di[c] - dot);
      }
      for (std::size_t b = 0; b < k; ++b) {
        double acc = 0.0;
        const auto row = static_cast<std::size_t>(params.relational_row(
            static_cast<int>(b)));
        for (std::size_t c = 0; c < k; ++c)
          acc += score_grad[c] * params.theta(row, c);
        routed[b] = acc;
      }

      // Route through the aggregator block into each neighbor's delta.
      switch (g.kind) {
        case AggregatorKind::kSum:
          for (int j : neighbors) {
            auto dj = delta_prev.row(static_cast<std::size_t>(j));
            for (std::size_t b = 0; b < k; ++b) dj[b] += routed[b];
          }
          break;
        case AggregatorKind::kProportion: {
          const double inv_deg = 1.0 / static_cast<double>(neighbors.size());
          for (int j : neighbors) {
            auto dj = delta_prev.row(static_cast<std::size_t>(j));
            for (std::size_t b = 0; b < k; ++b) dj[b] += inv_deg * routed[b];
          }
          break;
        }
        case AggregatorKind::kMode: {
          // g'_ij = (1/tau)(diag(r) - r r^T) is the same for every neighbor
          const double inv_tau = 1.0 / g.temperature;
          auto r = rel_t.row(i);
          double dot = 0.0;
          for (std::size_t b = 0; b < k; ++b) dot += routed[b] * r[b];
          for (std::size_t b = 0; b < k; ++b)
            through[b] = inv_tau * r[b] * (routed[b] - dot);
          for (int j : neighbors) {
            auto dj = delta_prev.row(static_cast<std::size_t>(j));
            for (std::size_t b = 0; b < k; ++b) dj[b] += through[b];
          }
          break;
        }
      }
    }
    deltas[t - 2] = std::move(delta_prev);
  }
  return deltas;
}

Matrix rcc_parameter_gradient(const UnrollTrace& trace,
                              const std::vector<Matrix>& deltas,
                              const AttributedGraph& graph,
                              const ClassifierSpec& f, const AggregatorSpec&,
                              const ParamMatrix& params, double lambda) {
  if (static_cast<int>(deltas.size()) != trace.steps())
    throw std::invalid_argument("delta count != unroll steps");
  Matrix grad(params.theta.rows(), params.theta.cols());
  for (int t = 1; t <= trace.steps(); ++t) {
    grad += classifier_param_gradient(f, graph.features.values,
                                      trace.relationals[t - 1],
                                      trace.predictions[t], deltas[t - 1]);
  }
  add_l2(grad, params, lambda);
  return grad;
}

FitResult adagrad_fit(int feature_dim, int num_classes,
                      const TrainConfig& config, const ObjectiveFn& objective) {
  FitResult result;
  result.params = ParamMatrix(feature_dim, num_classes);
  result.loss_history.reserve(config.iterations);
  Matrix accum(result.params.theta.rows(), result.params.theta.cols());

  for (int step = 1; step <= config.iterations; ++step) {
    ObjectiveEval eval = objective(result.params);
    if (!std::isfinite(eval.loss))
      throw std::runtime_error("non-finite loss at optimizer step " +
                               std::to_string(step));
    result.loss_history.push_back(eval.loss);
    auto& theta = result.params.theta.data();
    const auto& grad = eval.gradient.data();
    auto& acc = accum.data();
    for (std::size_t idx = 0; idx < theta.size(); ++idx) {
      acc[idx] += grad[idx] * grad[idx];
      theta[idx] -= config.learning_rate * grad[idx] /
                    (config.adagrad_epsilon + std::sqrt(acc[idx]));
    }
  }
  return result;
}

ObjectiveEval rcc_objective(const AttributedGraph& graph,
                            const ClassifierSpec& f, const AggregatorSpec& g,
                            const ParamMatrix& params, int unroll_iterations,
                            double lambda) {
  const LabelVector& labels = require_labels(graph);
  IcaResult forward =
      ica_predict(graph, f, g, params, training_unroll(unroll_iterations));
  LossGrad lg = cross_entropy_loss_and_grad(f.kind, forward.predictions, labels);
  const std::vector<Matrix> deltas =
      rcc_backprop(forward.trace, lg.delta, graph, f, g, params);
  ObjectiveEval eval;
  eval.loss = lg.loss + l2_penalty(params, lambda);
  eval.gradient = rcc_parameter_gradient(forward.trace, deltas, graph, f, g,
                                         params, lambda);
  return eval;
}

double rcc_unrolled_loss(const AttributedGraph& graph, const ClassifierSpec& f,
                         const AggregatorSpec& g, const ParamMatrix& params,
                         int unroll_iterations) {
  const LabelVector& labels = require_labels(graph);
  IcaResult forward =
      ica_predict(graph, f, g, params, training_unroll(unroll_iterations));
  return cross_entropy_loss_and_grad(f.kind, forward.predictions, labels).loss;
}

FitResult train_rcc(const AttributedGraph& graph, const ClassifierSpec& f,
                    const AggregatorSpec& g, const TrainConfig& config) {
  require_labels(graph);
  return adagrad_fit(graph.feature_dim(), graph.num_classes(), config,
                     [&](const ParamMatrix& params) {
                       return rcc_objective(graph, f, g, params,
                                            config.unroll_iterations,
                                            config.lambda);
                     });
}

FitResult train_ica_baseline(const AttributedGraph& graph,
                             const ClassifierSpec& f, const AggregatorSpec& g,
                             const TrainConfig& config) {
  const LabelVector& labels = require_labels(graph);
  const Matrix rel_hat = aggregate(g, labels.to_one_hot(), graph.adjacency);
  return adagrad_fit(graph.feature_dim(), graph.num_classes(), config,
                     [&, rel_hat](const ParamMatrix& params) {
                       return fixed_input_objective(graph.features.values,
                                                    rel_hat, labels, f, params,
                                                    config.lambda);
                     });
}

FitResult train_local(const AttributedGraph& graph, const ClassifierSpec& f,
                      const TrainConfig& config) {
  const LabelVector& labels = require_labels(graph);
  const Matrix zero_rel(static_cast<std::size_t>(graph.node_count()),
                        static_cast<std::size_t>(graph.num_classes()));
  return adagrad_fit(graph.feature_dim(), graph.num_classes(), config,
                     [&, zero_rel](const ParamMatrix& params) {
                       return fixed_input_objective(graph.features.values,
                                                    zero_rel, labels, f, params,
                                                    config.lambda);
                     });
}

double finite_difference_check(const AttributedGraph& graph,
                               const ClassifierSpec& f, const AggregatorSpec& g,
                               const ParamMatrix& params, int unroll_iterations,
                               double step) {
  const Matrix analytic =
      rcc_objective(graph, f, g, params, unroll_iterations, 0.0).gradient;
  ParamMatrix probe = params;
  double worst = 0.0;
  for (std::size_t idx = 0; idx < probe.theta.data().size(); ++idx) {
    const double saved = probe.theta.data()[idx];
    probe.theta.data()[idx] = saved + step;
    const double up = rcc_unrolled_loss(graph, f, g, probe, unroll_iterations);
    probe.theta.data()[idx] = saved - step;
    const double down = rcc_unrolled_loss(graph, f, g, probe, unroll_iterations);
    probe.theta.data()[idx] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double rel = std::abs(analytic.data()[idx] - numeric) /
                       std::max(1.0, std::abs(numeric));
    worst = std::max(worst, rel);
  }
  return worst;
}

std::vector<std::pair<double, double>> loss_cross_section(
    const ParamMatrix& theta_a, const ParamMatrix& theta_b,
    const std::vector<double>& alphas, const AttributedGraph& graph,
    const ClassifierSpec& f, const AggregatorSpec& g, int unroll_iterations) {
  if (theta_a.feature_dim != theta_b.feature_dim ||
      theta_a.num_classes != theta_b.num_classes)
    throw std::invalid_argument("cross-section endpoints differ in shape");
  std::vector<std::pair<double, double>> curve;
  curve.reserve(alphas.size());
  ParamMatrix blend = theta_a;
  for (double alpha : alphas) {
    for (std::size_t idx = 0; idx < blend.theta.data().size(); ++idx)
      blend.theta.data()[idx] =
          theta_a.theta.data()[idx] +
          alpha * (theta_b.theta.data()[idx] - theta_a.theta.data()[idx]);
    curve.emplace_back(alpha,
                       rcc_unrolled_loss(graph, f, g, blend, unroll_iterations));
  }
  return curve;
}

}  // namespace rcc
