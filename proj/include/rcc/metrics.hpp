#pragma once

#include <optional>

#include "rcc/graph.hpp"

namespace rcc {

struct Metrics {
  double accuracy = 0.0;
  std::optional<double> f1;  // binary tasks only, foreground = class 1
};

/// Exact-match accuracy; for k = 2 also the F1 of class 1 (0 when precision
/// and recall are both 0). Throws on length mismatch.
Metrics compute_metrics(const LabelVector& predicted, const LabelVector& truth);

}  // namespace rcc
