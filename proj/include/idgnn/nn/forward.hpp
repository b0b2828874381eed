#pragma once

#include "idgnn/graph.hpp"
#include "idgnn/nn/layer.hpp"
#include "idgnn/nn/message_graph.hpp"
#include "idgnn/nn/model.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace idgnn::nn {

/// Layer-0 input for `config` on graph `g`: the base features (the graph's
/// node features, or a column of ones when it has none) followed, for
/// id_fast, by the closed-walk counts of lengths 1..fast_k.
Matrix input_features(const ModelConfig& config, const Graph& g);

/// One run of the layer stack over a message graph.
struct StackInput {
  std::shared_ptr<const MessageGraph> graph;
  Matrix features;
};

/// Row `row` of the output of stack `stack`.
struct NodeRef {
  Index stack = 0;
  Index row = 0;
};

/// How one head-input row is assembled: concatenate the segments, each the
/// sum of the referenced embedding rows. A node readout is one segment with
/// one ref, sum pooling is one segment with many, a pair is two segments.
struct Readout {
  std::vector<std::vector<NodeRef>> segments;
};

struct StackTape {
  std::shared_ptr<const MessageGraph> graph;
  std::vector<LayerTape> layers;
  const Matrix& output() const { return layers.back().output; }
};

/// Everything a forward pass recorded; consumed by backward().
struct Tape {
  std::vector<StackTape> stacks;
  std::vector<Readout> readouts;
  Matrix head_input;
  Matrix head_hidden_pre;  ///< pair head only
  Matrix head_hidden;
  Matrix logits;
};

/// Runs the layer stacks, assembles the readouts and applies the head.
Tape forward(const Model& model, const std::vector<StackInput>& inputs, std::vector<Readout> readouts);

/// Exact reverse-mode gradients of Σ d_logits ⊙ logits with respect to
/// every parameter. Gradients of tied msg1 tensors are folded into msg0.
Parameters backward(const Model& model, const Tape& tape, const Matrix& d_logits);

/// Digest of every ReLU sign and max-aggregation winner in the tape. Two
/// forward passes with equal patterns lie on the same linear piece.
std::uint64_t activation_pattern(const Tape& tape);

/// Node embeddings of the whole graph after all layers, without identity
/// coloring. `x` holds the base features (input_dim columns); id_fast
/// models append their closed-walk columns themselves.
Matrix forward_plain(const Model& model, const Graph& g, const Matrix& x);

/// Heterogeneous message passing on the ego net; returns the center row.
RowVector forward_id_full(const Model& model, const EgoNet& ego, const Matrix& x_local);

/// h_{u|v}: embedding of u computed on u's ego net with the identity
/// coloring placed at v. Base features come from g (ones if absent).
RowVector forward_conditional(const Model& model, const Graph& g, NodeId u, NodeId v);

/// Column-wise sum of node embeddings.
RowVector readout_graph(const Matrix& embeddings);

/// Head logits for an ordered pair: [h_u | h_v] through the two-layer
/// perceptron head (ReLU hidden layer).
RowVector edge_pair_score(const RowVector& h_u, const RowVector& h_v, const HeadParams& head);

/// Head applied to a batch of head inputs.
Matrix apply_head(const HeadParams& head, const Matrix& input, Matrix* hidden_pre = nullptr, Matrix* hidden = nullptr);

}  // namespace idgnn::nn
