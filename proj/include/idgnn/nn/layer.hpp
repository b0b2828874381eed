#pragma once

#include "idgnn/nn/message_graph.hpp"
#include "idgnn/nn/model.hpp"

namespace idgnn::nn {

using IndexMatrix = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Values cached by one layer's forward pass for the backward pass.
struct LayerTape {
  Matrix input;           ///< h^(k-1), one row per node
  Matrix msg_input;       ///< sender rows (with edge features); empty means "same as input"
  Matrix msg_pre;         ///< x W_c + b_c per message row
  Matrix messages;        ///< after the message nonlinearity
  Matrix aggregated;      ///< per receiver
  IndexMatrix argmax;     ///< max aggregation: winning slot per (node, channel), −1 if none
  Matrix update_input;    ///< sage: [agg | h]; gin: ReLU(agg)
  Matrix pre_activation;  ///< before the output ReLU
  Matrix output;
};

LayerTape layer_forward(const LayerParams& p, const ModelConfig& config, const MessageGraph& graph, Matrix input);

/// Accumulates parameter gradients into `grads` and returns d(loss)/d(input).
/// Max aggregation routes each channel's gradient to the lowest-index
/// maximizing slot; ReLU has subgradient 0 at 0.
Matrix layer_backward(const LayerParams& p, const ModelConfig& config, const MessageGraph& graph,
                      const LayerTape& tape, const Matrix& d_output, LayerParams& grads);

}  // namespace idgnn::nn
