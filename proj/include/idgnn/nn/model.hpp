#pragma once

#include "idgnn/nn/config.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace idgnn::nn {

/// Row-major dense matrix of 64-bit reals. Node embeddings are rows.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::RowVectorXd;

/// Parameters of one message-passing layer. Weights are (in × out) and act
/// on row vectors; biases are (1 × out). Tensors a flavor does not use are
/// empty (0 × 0).
struct LayerParams {
  Matrix msg0_weight, msg0_bias;  ///< messages from uncolored senders
  Matrix msg1_weight, msg1_bias;  ///< messages from the identity-colored sender
  Matrix update_weight, update_bias;
  Matrix gin_epsilon;  ///< 1 × 1 for gin
};

/// Classifier on top of the embeddings. `hidden_*` is only used by the
/// two-layer pair head (edge tasks without identity coloring).
struct HeadParams {
  Matrix hidden_weight, hidden_bias;
  Matrix out_weight, out_bias;
};

/// All trainable tensors; also used as the gradient and Adam-moment container.
struct Parameters {
  std::vector<LayerParams> layers;
  HeadParams head;
};

struct Model {
  ModelConfig config;
  Parameters params;
};

/// A named view of one tensor inside a Parameters object.
struct TensorRef {
  std::string name;
  Matrix* tensor;
};

/// Every non-empty tensor in a fixed order. With `trainable_only`, the
/// msg1 tensors of non-heterogeneous variants are skipped: they are tied to
/// msg0 and not separate parameters.
std::vector<TensorRef> tensors(Parameters& p, const ModelConfig& config, bool trainable_only);
std::vector<const Matrix*> tensors(const Parameters& p, const ModelConfig& config, bool trainable_only);

Parameters zeros_like(const Parameters& p);

/// Draws parameters from U(−1/√fan_in, 1/√fan_in) (weights and biases),
/// GIN ε = 0, deterministic in config.seed. For plain and id_fast the msg1
/// tensors are copies of msg0.
Model init_model(const ModelConfig& config);

/// Copies msg0 into msg1 for variants whose message functions are tied.
void sync_tied(Model& model);

/// Sums gradients of tied tensors into msg0 and mirrors the total into msg1.
void tie_gradients(Parameters& grads, const ModelConfig& config);

Index count_parameters(const ModelConfig& config);

/// Largest hidden_dim whose parameter count does not exceed `budget`
/// (at least 1).
Index hidden_dim_for_budget(ModelConfig config, Index budget);

}  // namespace idgnn::nn
