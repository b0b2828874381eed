#pragma once

#include "idgnn/nn/model.hpp"

#include <cmath>
#include <cstdint>

namespace idgnn::nn {

struct AdamOptions {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected Adam update of one tensor at step t (t >= 1).
template <class DerivedP, class DerivedG, class DerivedM, class DerivedV>
void adam_update(Eigen::MatrixBase<DerivedP>& param, const Eigen::MatrixBase<DerivedG>& grad,
                 Eigen::MatrixBase<DerivedM>& m, Eigen::MatrixBase<DerivedV>& v, std::int64_t t,
                 const AdamOptions& opt) {
  m = opt.beta1 * m + (1.0 - opt.beta1) * grad;
  v = opt.beta2 * v + (1.0 - opt.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(t));
  param -= (opt.lr * (m / c1).array() / ((v / c2).array().sqrt() + opt.eps)).matrix();
}

struct AdamState {
  Parameters m, v;
  std::int64_t step = 0;
};

AdamState make_adam_state(const Model& model);

/// One Adam step over every trainable tensor; tied msg1 tensors are
/// re-synchronized afterwards.
void adam_step(Model& model, const Parameters& grads, AdamState& state, const AdamOptions& opt = {});

}  // namespace idgnn::nn
