#include "idgnn/nn/forward.hpp"

#include "idgnn/errors.hpp"
#include "idgnn/io.hpp"
#include "idgnn/walk_counts.hpp"

#include <cmath>
#include <string>

namespace idgnn::nn {

Matrix input_features(const ModelConfig& config, const Graph& g) {
  const Index n = g.num_nodes();
  Matrix base;
  if (g.node_features()) {
    base = *g.node_features();
  } else {
    base = Matrix::Ones(n, config.input_dim);
  }
  if (base.cols() != config.input_dim) {
    throw InputError("graph has " + std::to_string(base.cols()) + " feature columns, model expects " +
                     std::to_string(config.input_dim));
  }
  if (config.variant != Variant::id_fast) return base;
  const auto counts = analytic::walk_count_features(g, config.fast_k);
  Matrix out(n, config.layer0_input_dim());
  out.leftCols(config.input_dim) = base;
  for (Index v = 0; v < n; ++v) {
    for (Index j = 0; j < config.fast_k; ++j) {
      const double c = static_cast<double>(counts(v, j));
      out(v, config.input_dim + j) = config.fast_log_scale ? std::log1p(c) : c;
    }
  }
  return out;
}

Matrix apply_head(const HeadParams& head, const Matrix& input, Matrix* hidden_pre, Matrix* hidden) {
  Matrix logits;
  if (head.hidden_weight.size() > 0) {
    if (input.cols() != head.hidden_weight.rows()) throw InputError("head input width mismatch");
    Matrix pre = input * head.hidden_weight;
    pre.rowwise() += head.hidden_bias.row(0);
    Matrix act = pre.cwiseMax(0.0);
    logits = act * head.out_weight;
    if (hidden_pre) *hidden_pre = std::move(pre);
    if (hidden) *hidden = std::move(act);
  } else {
    if (input.cols() != head.out_weight.rows()) throw InputError("head input width mismatch");
    logits = input * head.out_weight;
  }
  logits.rowwise() += head.out_bias.row(0);
  return logits;
}

Tape forward(const Model& model, const std::vector<StackInput>& inputs, std::vector<Readout> readouts) {
  Tape tape;
  tape.stacks.reserve(inputs.size());
  for (const auto& in : inputs) {
    StackTape st;
    st.graph = in.graph;
    Matrix h = in.features;
    for (const auto& layer : model.params.layers) {
      st.layers.push_back(layer_forward(layer, model.config, *in.graph, std::move(h)));
      h = st.layers.back().output;
    }
    tape.stacks.push_back(std::move(st));
  }

  const Index hidden = model.config.hidden_dim;
  const Index segments = readouts.empty() ? 0 : static_cast<Index>(readouts.front().segments.size());
  tape.head_input = Matrix::Zero(static_cast<Index>(readouts.size()), segments * hidden);
  for (Index i = 0; i < static_cast<Index>(readouts.size()); ++i) {
    if (static_cast<Index>(readouts[i].segments.size()) != segments) throw InputError("ragged readouts");
    for (Index s = 0; s < segments; ++s) {
      for (const NodeRef& ref : readouts[i].segments[s]) {
        tape.head_input.row(i).segment(s * hidden, hidden) += tape.stacks.at(ref.stack).output().row(ref.row);
      }
    }
  }
  tape.readouts = std::move(readouts);
  tape.logits = apply_head(model.params.head, tape.head_input, &tape.head_hidden_pre, &tape.head_hidden);
  return tape;
}

Parameters backward(const Model& model, const Tape& tape, const Matrix& d_logits) {
  if (d_logits.rows() != tape.logits.rows() || d_logits.cols() != tape.logits.cols()) {
    throw InputError("backward: gradient shape does not match the recorded logits");
  }
  Parameters grads = zeros_like(model.params);
  const auto& head = model.params.head;
  auto& gh = grads.head;

  Matrix d_head_input;
  if (head.hidden_weight.size() > 0) {
    gh.out_weight.noalias() += tape.head_hidden.transpose() * d_logits;
    gh.out_bias += d_logits.colwise().sum();
    const Matrix d_pre =
        (d_logits * head.out_weight.transpose()).cwiseProduct((tape.head_hidden_pre.array() > 0.0).cast<double>().matrix());
    gh.hidden_weight.noalias() += tape.head_input.transpose() * d_pre;
    gh.hidden_bias += d_pre.colwise().sum();
    d_head_input = d_pre * head.hidden_weight.transpose();
  } else {
    gh.out_weight.noalias() += tape.head_input.transpose() * d_logits;
    gh.out_bias += d_logits.colwise().sum();
    d_head_input = d_logits * head.out_weight.transpose();
  }

  const Index hidden = model.config.hidden_dim;
  std::vector<Matrix> d_out(tape.stacks.size());
  for (std::size_t s = 0; s < tape.stacks.size(); ++s) {
    d_out[s] = Matrix::Zero(tape.stacks[s].output().rows(), hidden);
  }
  for (Index i = 0; i < static_cast<Index>(tape.readouts.size()); ++i) {
    const auto& segs = tape.readouts[i].segments;
    for (Index s = 0; s < static_cast<Index>(segs.size()); ++s) {
      for (const NodeRef& ref : segs[s]) d_out[ref.stack].row(ref.row) += d_head_input.row(i).segment(s * hidden, hidden);
    }
  }

  for (std::size_t s = 0; s < tape.stacks.size(); ++s) {
    const auto& st = tape.stacks[s];
    Matrix d = std::move(d_out[s]);
    for (Index l = static_cast<Index>(st.layers.size()) - 1; l >= 0; --l) {
      d = layer_backward(model.params.layers[l], model.config, *st.graph, st.layers[l], d, grads.layers[l]);
    }
  }
  tie_gradients(grads, model.config);
  return grads;
}

std::uint64_t activation_pattern(const Tape& tape) {
  std::uint64_t h = io::fnv1a64("pattern");
  std::string bits;
  const auto add_signs = [&](const Matrix& m) {
    bits.clear();
    bits.reserve(static_cast<std::size_t>(m.size()));
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) bits.push_back(m(i, j) > 0.0 ? '1' : '0');
    }
    h = io::fnv1a64(bits, h);
  };
  for (const auto& st : tape.stacks) {
    for (const auto& l : st.layers) {
      add_signs(l.msg_pre);
      add_signs(l.aggregated);
      add_signs(l.pre_activation);
      if (l.argmax.size() > 0) {
        h = io::fnv1a64(std::string_view(reinterpret_cast<const char*>(l.argmax.data()),
                                         static_cast<std::size_t>(l.argmax.size()) * sizeof(Index)),
                        h);
      }
    }
  }
  add_signs(tape.head_hidden_pre);
  return h;
}

namespace {

Matrix run_stack(const Model& model, const MessageGraph& graph, Matrix h) {
  for (const auto& layer : model.params.layers) h = layer_forward(layer, model.config, graph, std::move(h)).output;
  return h;
}

}  // namespace

Matrix forward_plain(const Model& model, const Graph& g, const Matrix& x) {
  const auto& c = model.config;
  if (x.rows() != g.num_nodes()) throw InputError("feature rows differ from num_nodes");
  if (x.cols() != c.input_dim) {
    throw InputError("features have " + std::to_string(x.cols()) + " columns, model expects " + std::to_string(c.input_dim));
  }
  Matrix h0 = x;
  if (c.variant == Variant::id_fast) h0 = input_features(c, g.with_node_features(FeatureMatrix(x)));
  return run_stack(model, make_message_graph(g), std::move(h0));
}

RowVector forward_id_full(const Model& model, const EgoNet& ego, const Matrix& x_local) {
  if (model.config.variant != Variant::id_full) throw InputError("forward_id_full requires an id_full model");
  if (x_local.rows() != ego.subgraph.num_nodes()) throw InputError("feature rows differ from ego size");
  if (x_local.cols() != model.config.input_dim) throw InputError("feature width differs from model input_dim");
  const Matrix h = run_stack(model, make_message_graph(ego), x_local);
  return h.row(ego.center_local_index);
}

RowVector forward_conditional(const Model& model, const Graph& g, NodeId u, NodeId v) {
  if (model.config.variant != Variant::id_full) throw InputError("forward_conditional requires an id_full model");
  const EgoNet ego = extract_ego(g, u, model.config.num_layers, v);
  return forward_id_full(model, ego, input_features(model.config, ego.subgraph));
}

RowVector readout_graph(const Matrix& embeddings) {
  if (embeddings.rows() == 0) throw InputError("readout_graph: empty graph");
  return embeddings.colwise().sum();
}

RowVector edge_pair_score(const RowVector& h_u, const RowVector& h_v, const HeadParams& head) {
  if (h_u.size() != h_v.size()) throw InputError("edge_pair_score: embedding widths differ");
  if (head.hidden_weight.size() == 0) throw InputError("edge_pair_score needs a pair head");
  Matrix input(1, h_u.size() + h_v.size());
  input << h_u, h_v;
  return apply_head(head, input).row(0);
}

}  // namespace idgnn::nn
