#include "rcc/model_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace rcc {

void save_param_matrix(const ParamMatrix& params, const ClassifierSpec& spec,
                       const std::string& path) {
  long code = 0;
  if (spec.kind == ClassifierKind::kSoftmax) {
    code = std::lround(spec.temperature * 1e6);
    if (code < 1) throw std::invalid_argument("temperature too small to encode");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << params.feature_dim << ' ' << params.num_classes << ' ' << code << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t r = 0; r < params.theta.rows(); ++r) {
    for (std::size_t c = 0; c < params.theta.cols(); ++c)
      out << params.theta(r, c) << (c + 1 == params.theta.cols() ? '\n' : ' ');
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::pair<ParamMatrix, ClassifierSpec> load_param_matrix(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  int d = 0, k = 0;
  long code = 0;
  if (!(in >> d >> k >> code) || d < 0 || k < 2 || code < 0)
    throw std::runtime_error(path + ": bad model header");
  ParamMatrix params(d, k);
  for (double& v : params.theta.data())
    if (!(in >> v)) throw std::runtime_error(path + ": truncated model file");
  ClassifierSpec spec;
  if (code == 0) {
    spec.kind = ClassifierKind::kSigmoid;
  } else {
    spec.kind = ClassifierKind::kSoftmax;
    spec.temperature = static_cast<double>(code) / 1e6;
  }
  return {std::move(params), spec};
}

}  // namespace rcc
