#pragma once

#include <cstdint>
#include <vector>

#include "rcc/classifier.hpp"
#include "rcc/graph.hpp"
#include "rcc/relational.hpp"

namespace rcc {

enum class PredictionInit { kZeros, kUniform };

struct InferenceConfig {
  int iterations = 10;  // T
  PredictionInit init = PredictionInit::kUniform;
  bool early_stop = false;          // prediction-only convergence cutoff
  double early_stop_tol = 1e-6;
  std::uint64_t seed = 0;           // Gibbs
  int burn_in = 100;                // Gibbs sweeps before counting
  int samples = 1000;               // Gibbs counted sweeps
};

/// The unrolled prediction sequence kept for back-propagation:
/// predictions P(0..T) and relational features R(1..T).
struct UnrollTrace {
  std::vector<Matrix> predictions;
  std::vector<Matrix> relationals;

  int steps() const { return static_cast<int>(relationals.size()); }
};

struct IcaResult {
  Matrix predictions;  // P(T)
  UnrollTrace trace;
};

/// Iterates R(t) = g(P(t-1)), P(t) = f(X, R(t)) for t = 1..T from the chosen
/// initialization and returns the final prediction with the full trace.
/// With early_stop set, stops once max |P(t) - P(t-1)| < tol (the trace
/// then covers only the executed steps).
IcaResult ica_predict(const AttributedGraph& graph, const ClassifierSpec& f,
                      const AggregatorSpec& g, const ParamMatrix& params,
                      const InferenceConfig& config);

/// Gibbs-sampling collective prediction: keeps one hard label per node,
/// resamples nodes in ascending order from the classifier distribution given
/// one-hot neighbor labels, and returns label frequencies over the counted
/// sweeps. Rows sum to 1 exactly.
Matrix gibbs_predict(const AttributedGraph& graph, const ClassifierSpec& f,
                     const AggregatorSpec& g, const ParamMatrix& params,
                     const InferenceConfig& config);

/// Per-row argmax; ties break toward the lowest class index.
LabelVector hard_labels(const Matrix& predictions);

}  // namespace rcc
