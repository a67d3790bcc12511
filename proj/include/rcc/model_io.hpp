#pragma once

#include <string>
#include <utility>

#include "rcc/classifier.hpp"

namespace rcc {

/// Plain-text model file. First line is a 3-integer header `d k code` where
/// code 0 means the sigmoid classifier and code > 0 means softmax with
/// temperature code / 1e6. Then d+1+k rows of k parameter values, row-major,
/// printed at full double precision.
void save_param_matrix(const ParamMatrix& params, const ClassifierSpec& spec,
                       const std::string& path);

std::pair<ParamMatrix, ClassifierSpec> load_param_matrix(
    const std::string& path);

}  // namespace rcc
