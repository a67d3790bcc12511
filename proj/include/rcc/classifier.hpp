#pragma once

#include <span>
#include <string>

#include "rcc/graph.hpp"
#include "rcc/matrix.hpp"

namespace rcc {

enum class ClassifierKind { kSigmoid, kSoftmax };

ClassifierKind classifier_kind_from_string(const std::string& name);
std::string to_string(ClassifierKind kind);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::kSigmoid;
  double temperature = 1.0;  // softmax only, > 0
};

/// Classifier weights, (d+1+k) x k: d local-feature rows, one bias row,
/// then k relational-feature rows.
struct ParamMatrix {
  int feature_dim = 0;   // d
  int num_classes = 0;   // k
  Matrix theta;          // (d+1+k) x k

  ParamMatrix() = default;
  ParamMatrix(int d, int k)
      : feature_dim(d), num_classes(k),
        theta(static_cast<std::size_t>(d + 1 + k),
              static_cast<std::size_t>(k)) {}

  int rows() const { return feature_dim + 1 + num_classes; }
  int bias_row() const { return feature_dim; }
  int relational_row(int c) const { return feature_dim + 1 + c; }
};

/// Probabilities are kept strictly inside (0, 1) for stable logs.
inline constexpr double kProbabilityFloor = 1e-12;

/// Numerically safe tempered softmax of a score row (max-subtraction).
void softmax_row(std::span<const double> scores, double temperature,
                 std::span<double> out);

/// Row scores [x_i, 1, r_i] . Theta for every node; n x k.
Matrix classifier_scores(const Matrix& features, const Matrix& relational,
                         const ParamMatrix& params);

/// Per-node class estimates: elementwise logistic of the scores, or the
/// row-wise tempered softmax. Throws on dimension mismatch.
Matrix classifier_forward(const ClassifierSpec& spec, const Matrix& features,
                          const Matrix& relational, const ParamMatrix& params);

/// dp_i/dr_i for one node given its forward output row p_i; k x k with
/// entry (a, b) = dp_a/dr_b.
Matrix classifier_jacobian_relational(const ClassifierSpec& spec,
                                      std::span<const double> p_row,
                                      const ParamMatrix& params);

/// Sum over nodes of [x_i, 1, r_i]^T (upstream_i . A_i) where A_i is the
/// activation Jacobian dp_i/ds_i; the single-step parameter gradient.
Matrix classifier_param_gradient(const ClassifierSpec& spec,
                                 const Matrix& features,
                                 const Matrix& relational,
                                 const Matrix& predictions,
                                 const Matrix& upstream);

struct LossGrad {
  double loss = 0.0;
  Matrix delta;  // dloss/dP, n x k
};

/// Node-averaged cross-entropy: multinomial for the softmax kind,
/// one-vs-rest for the sigmoid kind. Probabilities are clamped to
/// [1e-12, 1 - 1e-12] before logs.
LossGrad cross_entropy_loss_and_grad(ClassifierKind kind,
                                     const Matrix& predictions,
                                     const LabelVector& labels);

}  // namespace rcc
