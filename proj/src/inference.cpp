#include "rcc/inference.hpp"

#include <cmath>
#include <stdexcept>

#include "rcc/rng.hpp"

namespace rcc {

IcaResult ica_predict(const AttributedGraph& graph, const ClassifierSpec& f,
                      const AggregatorSpec& g, const ParamMatrix& params,
                      const InferenceConfig& config) {
  if (config.iterations < 1)
    throw std::invalid_argument("need at least one iteration");
  const auto n = static_cast<std::size_t>(graph.node_count());
  const auto k = static_cast<std::size_t>(params.num_classes);
  if (graph.feature_dim() != params.feature_dim)
    throw std::invalid_argument("graph feature dim != param feature dim");

  IcaResult result;
  Matrix p0(n, k);
  if (config.init == PredictionInit::kUniform)
    p0.fill(1.0 / static_cast<double>(k));
  result.trace.predictions.push_back(std::move(p0));

  for (int t = 1; t <= config.iterations; ++t) {
    const Matrix& prev = result.trace.predictions.back();
    Matrix rel = aggregate(g, prev, graph.adjacency);
    Matrix pred = classifier_forward(f, graph.features.values, rel, params);
    result.trace.relationals.push_back(std::move(rel));
    const bool converged =
        config.early_stop && max_abs_diff(pred, prev) < config.early_stop_tol;
    result.trace.predictions.push_back(std::move(pred));
    if (converged) break;
  }
  result.predictions = result.trace.predictions.back();
  return result;
}

Matrix gibbs_predict(const AttributedGraph& graph, const ClassifierSpec& f,
                     const AggregatorSpec& g, const ParamMatrix& params,
                     const InferenceConfig& config) {
  if (config.burn_in < 0 || config.samples < 1)
    throw std::invalid_argument("need burn_in >= 0 and samples >= 1");
  const int n = graph.node_count();
  const auto k = static_cast<std::size_t>(params.num_classes);
  Rng rng(config.seed);

  // Hard assignments start from the local classifier (zero relational input).
  Matrix assignment(static_cast<std::size_t>(n), k);
  {
    const Matrix zero_rel(static_cast<std::size_t>(n), k);
    const Matrix local =
        classifier_forward(f, graph.features.values, zero_rel, params);
    for (int i = 0; i < n; ++i) {
      auto p = local.row(static_cast<std::size_t>(i));
      double total = 0.0;
      for (double v : p) total += v;
      double pick = rng.uniform() * total;
      std::size_t y = 0;
      while (y + 1 < k && pick >= p[y]) pick -= p[y], ++y;
      assignment(static_cast<std::size_t>(i), y) = 1.0;
    }
  }

  Matrix counts(static_cast<std::size_t>(n), k);
  Matrix rel_row(1, k);
  Matrix feat_row(1, static_cast<std::size_t>(graph.feature_dim()));
  const int total_sweeps = config.burn_in + config.samples;

  for (int sweep = 0; sweep < total_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      // relational features of node i from current one-hot assignments
      auto r = rel_row.row(0);
      for (std::size_t c = 0; c < k; ++c) r[c] = 0.0;
      const auto& neighbors = graph.adjacency.neighbors(i);
      if (!neighbors.empty()) {
        for (int j : neighbors) {
          auto aj = assignment.row(static_cast<std::size_t>(j));
          for (std::size_t c = 0; c < k; ++c) r[c] += aj[c];
        }
        if (g.kind == AggregatorKind::kProportion) {
          const double inv_deg = 1.0 / static_cast<double>(neighbors.size());
          for (std::size_t c = 0; c < k; ++c) r[c] *= inv_deg;
        } else if (g.kind == AggregatorKind::kMode) {
          softmax_row(r, g.temperature, r);
        }
      }
      auto x = graph.features.values.row(ui);
      std::copy(x.begin(), x.end(), feat_row.row(0).begin());
      const Matrix p = classifier_forward(f, feat_row, rel_row, params);
      auto dist = p.row(0);
      double total = 0.0;
      for (double v : dist) total += v;
      double pick = rng.uniform() * total;
      std::size_t y = 0;
      while (y + 1 < k && pick >= dist[y]) pick -= dist[y], ++y;
      auto a = assignment.row(ui);
      for (std::size_t c = 0; c < k; ++c) a[c] = 0.0;
      a[y] = 1.0;
      if (sweep >= config.burn_in) counts(ui, y) += 1.0;
    }
  }

  counts *= 1.0 / static_cast<double>(config.samples);
  return counts;
}

LabelVector hard_labels(const Matrix& predictions) {
  const auto n = predictions.rows();
  const auto k = predictions.cols();
  if (k < 2) throw std::invalid_argument("need at least two classes");
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = predictions.row(i);
    std::size_t best = 0;
    for (std::size_t c = 1; c < k; ++c)
      if (row[c] > row[best]) best = c;
    labels[i] = static_cast<int>(best);
  }
  return LabelVector(std::move(labels), static_cast<int>(k));
}

}  // namespace rcc
