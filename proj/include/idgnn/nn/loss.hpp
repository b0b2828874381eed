#pragma once

#include "idgnn/nn/model.hpp"

#include <span>

namespace idgnn::nn {

struct LossResult {
  double loss = 0.0;
  Matrix grad;  ///< d(loss)/d(logits)
};

/// Mean softmax cross-entropy over rows, with its analytic gradient
/// (softmax − onehot) / rows.
LossResult softmax_cross_entropy(const Matrix& logits, std::span<const int> labels);

/// Row-wise argmax; ties go to the lowest class index.
std::vector<int> predict(const Matrix& logits);

}  // namespace idgnn::nn
