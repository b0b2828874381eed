#include "idgnn/nn/loss.hpp"

#include "idgnn/errors.hpp"

#include <cmath>
#include <string>

namespace idgnn::nn {

LossResult softmax_cross_entropy(const Matrix& logits, std::span<const int> labels) {
  const Index rows = logits.rows();
  if (static_cast<Index>(labels.size()) != rows) throw InputError("label count differs from logits rows");
  if (rows == 0) throw InputError("softmax_cross_entropy: empty batch");
  LossResult out{0.0, Matrix(rows, logits.cols())};
  for (Index i = 0; i < rows; ++i) {
    const int y = labels[i];
    if (y < 0 || y >= logits.cols()) {
      throw InputError("label " + std::to_string(y) + " out of range for " + std::to_string(logits.cols()) + " classes");
    }
    const double shift = logits.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(i).array() - shift).exp().matrix();
    const double z = e.sum();
    out.loss += std::log(z) + shift - logits(i, y);
    out.grad.row(i) = e / z;
    out.grad(i, y) -= 1.0;
  }
  out.loss /= static_cast<double>(rows);
  out.grad /= static_cast<double>(rows);
  return out;
}

std::vector<int> predict(const Matrix& logits) {
  std::vector<int> out(static_cast<std::size_t>(logits.rows()));
  for (Index i = 0; i < logits.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < logits.cols(); ++c) {
      if (logits(i, c) > logits(i, best)) best = c;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

}  // namespace idgnn::nn
