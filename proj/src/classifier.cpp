#include "rcc/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcc {
namespace {

double clamp_probability(double p) {
  return std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

void check_shapes(const Matrix& features, const Matrix& relational,
                  const ParamMatrix& params) {
  if (params.theta.rows() != static_cast<std::size_t>(params.rows()) ||
      params.theta.cols() != static_cast<std::size_t>(params.num_classes))
    throw std::invalid_argument("param matrix shape inconsistent");
  if (static_cast<int>(features.cols()) != params.feature_dim)
    throw std::invalid_argument("feature dim != param local block");
  if (static_cast<int>(relational.cols()) != params.num_classes)
    throw std::invalid_argument("relational dim != class count");
  if (features.rows() != relational.rows())
    throw std::invalid_argument("feature/relational row mismatch");
}

}  // namespace

ClassifierKind classifier_kind_from_string(const std::string& name) {
  if (name == "sigmoid") return ClassifierKind::kSigmoid;
  if (name == "softmax") return ClassifierKind::kSoftmax;
  throw std::invalid_argument("unknown classifier kind: " + name);
}

std::string to_string(ClassifierKind kind) {
  return kind == ClassifierKind::kSigmoid ? "sigmoid" : "softmax";
}

void softmax_row(std::span<const double> scores, double temperature,
                 std::span<double> out) {
  const double top = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    out[c] = std::exp((scores[c] - top) / temperature);
    total += out[c];
  }
  for (std::size_t c = 0; c < scores.size(); ++c)
    out[c] = clamp_probability(out[c] / total);
}

Matrix classifier_scores(const Matrix& features, const Matrix& relational,
                         const ParamMatrix& params) {
  check_shapes(features, relational, params);
  const std::size_t n = features.rows();
  const auto d = static_cast<std::size_t>(params.feature_dim);
  const auto k = static_cast<std::size_t>(params.num_classes);
  Matrix scores(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = features.row(i);
    auto r = relational.row(i);
    auto s = scores.row(i);
    for (std::size_t c = 0; c < k; ++c) {
      double acc = params.theta(d, c);  // bias input is a constant 1
      for (std::size_t j = 0; j < d; ++j) acc += x[j] * params.theta(j, c);
      for (std::size_t j = 0; j < k; ++j)
        acc += r[j] * params.theta(d + 1 + j, c);
      s[c] = acc;
    }
  }
  return scores;
}

Matrix classifier_forward(const ClassifierSpec& spec, const Matrix& features,
                          const Matrix& relational, const ParamMatrix& params) {
  if (spec.kind == ClassifierKind::kSoftmax && spec.temperature <= 0.0)
    throw std::invalid_argument("softmax temperature must be positive");
  Matrix p = classifier_scores(features, relational, params);
  if (spec.kind == ClassifierKind::kSigmoid) {
    for (double& v : p.data())
      v = clamp_probability(1.0 / (1.0 + std::exp(-v)));
  } else {
    std::vector<double> buf(p.cols());
    for (std::size_t i = 0; i < p.rows(); ++i) {
      auto row = p.row(i);
      softmax_row(row, spec.temperature, buf);
      std::copy(buf.begin(), buf.end(), row.begin());
    }
  }
  return p;
}

Matrix classifier_jacobian_relational(const ClassifierSpec& spec,
                                      std::span<const double> p_row,
                                      const ParamMatrix& params) {
  const auto k = static_cast<std::size_t>(params.num_classes);
  if (p_row.size() != k) throw std::invalid_argument("prediction row size != k");
  Matrix jac(k, k);
  if (spec.kind == ClassifierKind::kSigmoid) {
    // dp_a/dr_b = p_a (1 - p_a) Theta_r[b, a]
    for (std::size_t a = 0; a < k; ++a) {
      const double slope = p_row[a] * (1.0 - p_row[a]);
      for (std::size_t b = 0; b < k; ++b)
        jac(a, b) = slope * params.theta(params.relational_row(b), a);
    }
  } else {
    // dp_a/dr_b = (1/tau) sum_c (p_a [a==c] - p_a p_c) Theta_r[b, c]
    const double inv_tau = 1.0 / spec.temperature;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        double acc = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          const double soft =
              p_row[a] * ((a == c ? 1.0 : 0.0) - p_row[c]);
          acc += soft * params.theta(params.relational_row(b), c);
        }
        jac(a, b) = inv_tau * acc;
      }
  }
  return jac;
}

Matrix classifier_param_gradient(const ClassifierSpec& spec,
                                 const Matrix& features,
                                 const Matrix& relational,
                                 const Matrix& predictions,
                                 const Matrix& upstream) {
  if (features.rows() != relational.rows() ||
      predictions.rows() != features.rows() ||
      upstream.rows() != features.rows() ||
      predictions.cols() != relational.cols() ||
      upstream.cols() != relational.cols())
    throw std::invalid_argument("prediction/upstream shape mismatch");

  const std::size_t n = features.rows();
  const std::size_t d = features.cols();
  const std::size_t k = relational.cols();
  Matrix grad(d + 1 + k, k);
  std::vector<double> score_grad(k);  // upstream_i . dp_i/ds_i

  for (std::size_t i = 0; i < n; ++i) {
    auto p = predictions.row(i);
    auto u = upstream.row(i);
    if (spec.kind == ClassifierKind::kSigmoid) {
      for (std::size_t c = 0; c < k; ++c)
        score_grad[c] = u[c] * p[c] * (1.0 - p[c]);
    } else {
      const double inv_tau = 1.0 / spec.temperature;
      double dot = 0.0;
      for (std::size_t c = 0; c < k; ++c) dot += u[c] * p[c];
      for (std::size_t c = 0; c < k; ++c)
        score_grad[c] = inv_tau * p[c] * (u[c] - dot);
    }
    auto x = features.row(i);
    auto r = relational.row(i);
    for (std::size_t c = 0; c < k; ++c) {
      const double g = score_grad[c];
      if (g == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) grad(j, c) += x[j] * g;
      grad(d, c) += g;
      for (std::size_t j = 0; j < k; ++j) grad(d + 1 + j, c) += r[j] * g;
    }
  }
  return grad;
}

LossGrad cross_entropy_loss_and_grad(ClassifierKind kind,
                                     const Matrix& predictions,
                                     const LabelVector& labels) {
  const std::size_t n = predictions.rows();
  const std::size_t k = predictions.cols();
  if (static_cast<int>(n) != labels.size() ||
      static_cast<int>(k) != labels.num_classes())
    throw std::invalid_argument("prediction/label shape mismatch");
  if (n == 0) throw std::invalid_argument("empty prediction matrix");

  LossGrad out;
  out.delta = Matrix(n, k);
  const double inv_n = 1.0 / static_cast<double>(n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto y = static_cast<std::size_t>(labels[static_cast<int>(i)]);
    auto p = predictions.row(i);
    auto g = out.delta.row(i);
    if (kind == ClassifierKind::kSoftmax) {
      const double q = clamp_probability(p[y]);
      out.loss -= inv_n * std::log(q);
      g[y] = -inv_n / q;
    } else {
      for (std::size_t c = 0; c < k; ++c) {
        const double q = clamp_probability(p[c]);
        if (c == y) {
          out.loss -= inv_n * std::log(q);
          g[c] = -inv_n / q;
        } else {
          out.loss -= inv_n * std::log(1.0 - q);
          g[c] = inv_n / (1.0 - q);
        }
      }
    }
  }
  return out;
}

}  // namespace rcc
