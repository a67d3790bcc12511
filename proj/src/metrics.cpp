#include "rcc/metrics.hpp"

#include <stdexcept>

namespace rcc {

Metrics compute_metrics(const LabelVector& predicted,
                        const LabelVector& truth) {
  if (predicted.size() != truth.size())
    throw std::invalid_argument("prediction/truth length mismatch");
  const int n = truth.size();
  if (n == 0) throw std::invalid_argument("empty label vectors");

  int correct = 0;
  int true_pos = 0, pred_pos = 0, actual_pos = 0;
  for (int i = 0; i < n; ++i) {
    const int p = predicted[i];
    const int y = truth[i];
    if (p == y) ++correct;
    if (p == 1) ++pred_pos;
    if (y == 1) ++actual_pos;
    if (p == 1 && y == 1) ++true_pos;
  }

  Metrics m;
  m.accuracy = static_cast<double>(correct) / n;
  if (truth.num_classes() == 2) {
    const double precision =
        pred_pos > 0 ? static_cast<double>(true_pos) / pred_pos : 0.0;
    const double recall =
        actual_pos > 0 ? static_cast<double>(true_pos) / actual_pos : 0.0;
    m.f1 = (precision + recall > 0.0)
               ? 2.0 * precision * recall / (precision + recall)
               : 0.0;
  }
  return m;
}

}  // namespace rcc
