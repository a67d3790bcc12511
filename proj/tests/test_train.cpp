#include <cmath>
#include <vector>

#include "doctest.h"
#include "rcc/metrics.hpp"
#include "rcc/rng.hpp"
#include "rcc/train.hpp"
#include "support/builders.hpp"
#include "support/dense_backprop.hpp"
#include "support/finite_diff.hpp"

using rcc::AggregatorKind;
using rcc::AggregatorSpec;
using rcc::ClassifierKind;
using rcc::ClassifierSpec;
using rcc::ica_predict;
using rcc::InferenceConfig;
using rcc::Matrix;
using rcc::ParamMatrix;
using rcc::rcc_backprop;
using rcc::TrainConfig;
using testsupport::fd_gradient;
using testsupport::max_rel_err;

namespace {

const ClassifierSpec kSigmoid{ClassifierKind::kSigmoid, 1.0};
const ClassifierSpec kSoftmax{ClassifierKind::kSoftmax, 0.5};
const AggregatorSpec kSum{AggregatorKind::kSum, 0.5};
const AggregatorSpec kProportion{AggregatorKind::kProportion, 0.5};
const AggregatorSpec kMode{AggregatorKind::kMode, 0.5};

rcc::IcaResult unroll(const rcc::AttributedGraph& graph,
                      const ClassifierSpec& f, const AggregatorSpec& g,
                      const ParamMatrix& params, int steps) {
  InferenceConfig config;
  config.iterations = steps;
  config.init = rcc::PredictionInit::kZeros;
  return ica_predict(graph, f, g, params, config);
}

}  // namespace

TEST_CASE("backprop: empty neighbor sums kill earlier deltas") {
  const auto graph = testsupport::edgeless_graph(8, 3, 2, 1);
  const auto params = testsupport::random_params(3, 2, 2);
  const auto fwd = unroll(graph, kSoftmax, kSum, params, 4);
  const auto delta_final = testsupport::random_matrix(8, 2, 3);
  const auto deltas =
      rcc_backprop(fwd.trace, delta_final, graph, kSoftmax, kSum, params);
  REQUIRE(deltas.size() == 4);
  CHECK(rcc::max_abs_diff(deltas[3], delta_final) == 0.0);
  for (int t = 0; t < 3; ++t)
    for (double v : deltas[t].data()) CHECK(v == 0.0);
}

TEST_CASE("backprop: zero relational weights sever the chain") {
  const auto graph = testsupport::path_graph(6, 3, 2, 4);
  auto params = testsupport::random_params(3, 2, 5);
  for (int b = 0; b < 2; ++b)
    for (int c = 0; c < 2; ++c) params.theta(params.relational_row(b), c) = 0.0;
  const auto fwd = unroll(graph, kSigmoid, kProportion, params, 3);
  const auto delta_final = testsupport::random_matrix(6, 2, 6);
  const auto deltas =
      rcc_backprop(fwd.trace, delta_final, graph, kSigmoid, kProportion, params);
  for (int t = 0; t < 2; ++t)
    for (double v : deltas[t].data()) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("backprop on a 3-node path matches the dense chain rule and FD") {
  const auto graph = testsupport::path_graph(3, 2, 2, 7);
  const auto params = testsupport::random_params(2, 2, 8);
  const int steps = 3;

  for (const auto& f : {kSigmoid, kSoftmax}) {
    for (const auto& g : {kSum, kProportion, kMode}) {
      const auto fwd = unroll(graph, f, g, params, steps);
      const auto lg = rcc::cross_entropy_loss_and_grad(
          f.kind, fwd.predictions, *graph.labels);
      const auto sparse =
          rcc_backprop(fwd.trace, lg.delta, graph, f, g, params);
      const auto dense = testsupport::dense_backprop(fwd.trace, lg.delta,
                                                     graph, f, g, params);
      REQUIRE(sparse.size() == dense.size());
      for (std::size_t t = 0; t < sparse.size(); ++t)
        CHECK(rcc::max_abs_diff(sparse[t], dense[t]) < 1e-10);

      const auto analytic = rcc::rcc_parameter_gradient(
          fwd.trace, sparse, graph, f, g, params, 0.0);
      const auto loss_at = [&](const Matrix& theta) {
        ParamMatrix probe = params;
        probe.theta = theta;
        return rcc::rcc_unrolled_loss(graph, f, g, probe, steps);
      };
      const auto numeric = fd_gradient(loss_at, params.theta);
      CHECK(max_rel_err(analytic, numeric) < 1e-4);
    }
  }
}

TEST_CASE("backprop equals the dense oracle on random graphs") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const int n = 4 + static_cast<int>(seed % 5);
    const auto graph = testsupport::small_synthetic(n, 3, 3, 100 + seed, 3.0);
    const auto params = testsupport::random_params(3, 3, 200 + seed);
    const auto& f = (seed % 2 == 0) ? kSigmoid : kSoftmax;
    const auto& g = (seed % 3 == 0) ? kSum : (seed % 3 == 1) ? kProportion : kMode;

    const auto fwd = unroll(graph, f, g, params, 4);
    const auto delta_final =
        testsupport::random_matrix(n, 3, 300 + seed);
    const auto sparse =
        rcc_backprop(fwd.trace, delta_final, graph, f, g, params);
    const auto dense = testsupport::dense_backprop(fwd.trace, delta_final,
                                                   graph, f, g, params);
    for (std::size_t t = 0; t < sparse.size(); ++t)
      CHECK(rcc::max_abs_diff(sparse[t], dense[t]) < 1e-10);
  }
}

TEST_CASE("parameter gradient: regularizer-only and FD-certified paths") {
  const auto graph = testsupport::small_synthetic(10, 3, 2, 9, 3.0);
  const auto params = testsupport::random_params(3, 2, 10);
  const int steps = 2;
  const auto fwd = unroll(graph, kSoftmax, kProportion, params, steps);

  std::vector<Matrix> zero_deltas(steps, Matrix(10, 2));
  const auto none = rcc::rcc_parameter_gradient(fwd.trace, zero_deltas, graph,
                                                kSoftmax, kProportion, params,
                                                0.0);
  for (double v : none.data()) CHECK(v == 0.0);

  const double lambda = 0.25;
  const auto reg_only = rcc::rcc_parameter_gradient(
      fwd.trace, zero_deltas, graph, kSoftmax, kProportion, params, lambda);
  for (std::size_t r = 0; r < reg_only.rows(); ++r)
    for (std::size_t c = 0; c < reg_only.cols(); ++c) {
      const double expect =
          (r == static_cast<std::size_t>(params.bias_row()))
              ? 0.0
              : lambda * params.theta(r, c);
      CHECK(reg_only(r, c) == doctest::Approx(expect));
    }

  // full objective (loss + L2) against finite differences
  const auto objective_at = [&](const Matrix& theta) {
    ParamMatrix probe = params;
    probe.theta = theta;
    double penalty = 0.0;
    for (std::size_t r = 0; r < theta.rows(); ++r) {
      if (r == static_cast<std::size_t>(params.bias_row())) continue;
      for (std::size_t c = 0; c < theta.cols(); ++c)
        penalty += theta(r, c) * theta(r, c);
    }
    return rcc::rcc_unrolled_loss(graph, kSoftmax, kProportion, probe, steps) +
           0.5 * lambda * penalty;
  };
  const auto numeric = fd_gradient(objective_at, params.theta);
  const auto analytic =
      rcc::rcc_objective(graph, kSoftmax, kProportion, params, steps, lambda)
          .gradient;
  CHECK(max_rel_err(analytic, numeric) < 1e-4);
}

TEST_CASE("adagrad: fixed points, quadratic descent, determinism") {
  TrainConfig config;
  config.iterations = 10;
  config.learning_rate = 0.1;

  const auto zero_objective = [](const ParamMatrix& params) {
    rcc::ObjectiveEval eval;
    eval.gradient = Matrix(params.theta.rows(), params.theta.cols());
    eval.loss = 0.0;
    return eval;
  };
  const auto still = rcc::adagrad_fit(2, 2, config, zero_objective);
  for (double v : still.params.theta.data()) CHECK(v == 0.0);

  // 1-D quadratic (theta - 1)^2 / 2 tracked against a hand simulation of the
  // update rule; |theta - 1| shrinks monotonically
  const auto quadratic = [](const ParamMatrix& params) {
    rcc::ObjectiveEval eval;
    const double theta = params.theta(0, 0);
    eval.loss = 0.5 * (theta - 1.0) * (theta - 1.0);
    eval.gradient = Matrix(params.theta.rows(), params.theta.cols());
    eval.gradient(0, 0) = theta - 1.0;
    return eval;
  };
  TrainConfig tiny = config;
  tiny.iterations = 10;
  const auto fit = rcc::adagrad_fit(0, 2, tiny, quadratic);

  double theta = 0.0, accum = 0.0, prev_gap = 1.0;
  for (int step = 0; step < 10; ++step) {
    const double grad = theta - 1.0;
    accum += grad * grad;
    theta -= 0.1 * grad / (1e-8 + std::sqrt(accum));
    const double gap = std::abs(theta - 1.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(fit.params.theta(0, 0) == doctest::Approx(theta));
  CHECK(fit.loss_history.size() == 10);
  CHECK(fit.loss_history.front() == doctest::Approx(0.5));

  const auto graph = testsupport::small_synthetic(20, 3, 2, 11, 3.0);
  TrainConfig train;
  train.iterations = 30;
  train.unroll_iterations = 3;
  const auto a = rcc::train_rcc(graph, kSoftmax, kProportion, train);
  const auto b = rcc::train_rcc(graph, kSoftmax, kProportion, train);
  CHECK(rcc::max_abs_diff(a.params.theta, b.params.theta) == 0.0);
}

TEST_CASE("ica baseline: edgeless training equals local training") {
  const auto graph = testsupport::edgeless_graph(15, 4, 3, 12);
  TrainConfig config;
  config.iterations = 50;
  const auto baseline = rcc::train_ica_baseline(graph, kSoftmax, kSum, config);
  const auto local = rcc::train_local(graph, kSoftmax, config);
  CHECK(rcc::max_abs_diff(baseline.params.theta, local.params.theta) == 0.0);
}

TEST_CASE("ica baseline: homophilous proportion features are one-hot") {
  rcc::SyntheticGraphConfig config;
  config.nodes = 60;
  config.num_classes = 3;
  config.feature_dim = 4;
  config.homophily = 1.0;
  config.avg_degree = 4.0;
  config.seed = 13;
  const auto graph = rcc::generate_synthetic_homophily_graph(config);
  const auto rel_hat =
      aggregate(kProportion, graph.labels->to_one_hot(), graph.adjacency);
  for (int i = 0; i < graph.node_count(); ++i) {
    if (graph.adjacency.degree(i) == 0) continue;
    for (int c = 0; c < 3; ++c) {
      const double expect = (c == graph.labels->raw_values()[i]) ? 1.0 : 0.0;
      CHECK(rel_hat(i, c) == doctest::Approx(expect));
    }
  }
}

TEST_CASE("finite_difference_check certifies every configuration") {
  const auto severed = [&] {
    auto graph = testsupport::small_synthetic(12, 3, 2, 14, 3.0);
    auto params = testsupport::random_params(3, 2, 15);
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        params.theta(params.relational_row(b), c) = 0.0;
    return rcc::finite_difference_check(graph, kSigmoid, kProportion, params,
                                        3);
  }();
  CHECK(severed < 1e-6);

  const auto graph = testsupport::small_synthetic(20, 5, 3, 16);
  for (const auto& f : {kSigmoid, kSoftmax})
    for (const auto& g : {kSum, kProportion, kMode}) {
      const auto params = testsupport::random_params(5, 3, 17);
      CHECK(rcc::finite_difference_check(graph, f, g, params, 3) < 1e-4);
    }

  // halving the step keeps the check stable
  const auto params = testsupport::random_params(5, 3, 18);
  const double coarse =
      rcc::finite_difference_check(graph, kSoftmax, kProportion, params, 3,
                                   1e-6);
  const double fine =
      rcc::finite_difference_check(graph, kSoftmax, kProportion, params, 3,
                                   5e-7);
  CHECK(fine < 10.0 * std::max(coarse, 1e-12));
}

TEST_CASE("T = 1 gradient reduces to the plain classifier at R = g(0)") {
  const auto graph = testsupport::small_synthetic(15, 4, 3, 19);
  const auto params = testsupport::random_params(4, 3, 20);

  const auto rcc_grad =
      rcc::rcc_objective(graph, kSoftmax, kProportion, params, 1, 0.0).gradient;

  const Matrix zero_rel(15, 3);  // g of the zero init is identically zero
  const auto pred = rcc::classifier_forward(kSoftmax, graph.features.values,
                                            zero_rel, params);
  const auto lg =
      rcc::cross_entropy_loss_and_grad(kSoftmax.kind, pred, *graph.labels);
  const auto local_grad = rcc::classifier_param_gradient(
      kSoftmax, graph.features.values, zero_rel, pred, lg.delta);
  CHECK(rcc::max_abs_diff(rcc_grad, local_grad) == 0.0);
}

TEST_CASE("loss cross-section: endpoints and degenerate segment") {
  const auto graph = testsupport::small_synthetic(20, 3, 2, 21);
  const auto theta_a = testsupport::random_params(3, 2, 22);
  const auto theta_b = testsupport::random_params(3, 2, 23);
  const int steps = 4;

  const auto curve = rcc::loss_cross_section(
      theta_a, theta_b, {0.0, 0.5, 1.0}, graph, kSoftmax, kProportion, steps);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].second == doctest::Approx(rcc::rcc_unrolled_loss(
                               graph, kSoftmax, kProportion, theta_a, steps)));
  CHECK(curve[2].second == doctest::Approx(rcc::rcc_unrolled_loss(
                               graph, kSoftmax, kProportion, theta_b, steps)));

  const auto flat = rcc::loss_cross_section(
      theta_a, theta_a, {-0.2, 0.0, 1.2}, graph, kSoftmax, kProportion, steps);
  CHECK(flat[0].second == doctest::Approx(flat[1].second));
  CHECK(flat[2].second == doctest::Approx(flat[1].second));
}

TEST_CASE("test accuracy is insensitive to the unroll length") {
  rcc::SyntheticGraphConfig sc;
  sc.nodes = 300;
  sc.num_classes = 3;
  sc.feature_dim = 10;
  sc.homophily = 0.9;
  sc.signal = 0.3;
  sc.avg_degree = 6.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    sc.seed = rcc::mix_seed(seed, 50);
    const auto graph = rcc::generate_synthetic_homophily_graph(sc);
    const auto split = rcc::snowball_split(graph, 0.2, rcc::mix_seed(seed, 51));
    double lo = 1.0, hi = 0.0;
    for (int steps : {5, 10, 20}) {
      TrainConfig config;
      config.iterations = 300;
      config.unroll_iterations = steps;
      config.lambda = 1e-2;
      const auto fit = rcc::train_rcc(split.train, kSoftmax, kProportion, config);
      InferenceConfig inference;
      inference.iterations = steps;
      inference.init = rcc::PredictionInit::kZeros;
      const auto pred = rcc::ica_predict(split.test, kSoftmax, kProportion,
                                         fit.params, inference);
      const double acc =
          rcc::compute_metrics(rcc::hard_labels(pred.predictions),
                               *split.test.labels)
              .accuracy;
      lo = std::min(lo, acc);
      hi = std::max(hi, acc);
    }
    CHECK(hi - lo <= 0.05);
  }
}

TEST_CASE("training drives the unrolled loss down substantially") {
  const auto graph = testsupport::small_synthetic(80, 6, 3, 24, 6.0);
  TrainConfig config;
  config.iterations = 200;
  config.unroll_iterations = 5;
  config.lambda = 1e-3;
  const auto fit = rcc::train_rcc(graph, kSoftmax, kProportion, config);
  REQUIRE(fit.loss_history.size() == 200);
  CHECK(fit.loss_history.back() < 0.9 * fit.loss_history.front());
}
