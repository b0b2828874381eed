#include "idgnn/nn/layer.hpp"

#include "idgnn/errors.hpp"

#include <cmath>
#include <string>

namespace idgnn::nn {

namespace {

/// Message-row layout. Without edge features messages are per sender node;
/// with them, one row per slot followed by one self row per node.
struct RowMap {
  const MessageGraph& g;
  bool per_slot;

  Index rows() const { return per_slot ? g.num_slots() + g.num_nodes : g.num_nodes; }
  Index slot_row(Index s) const { return per_slot ? s : g.senders[s]; }
  Index self_row(NodeId u) const { return per_slot ? g.num_slots() + u : u; }
  NodeId sender_of_row(Index r) const {
    if (!per_slot) return r;
    return r < g.num_slots() ? g.senders[r] : r - g.num_slots();
  }
  bool colored(Index r) const { return g.identity[sender_of_row(r)]; }
};

Matrix relu(const Matrix& m) { return m.cwiseMax(0.0); }
Matrix relu_mask(const Matrix& m) { return (m.array() > 0.0).cast<double>().matrix(); }

double gcn_coef(const MessageGraph& g, NodeId u, NodeId s) {
  return 1.0 / std::sqrt(static_cast<double>((g.norm_degree[u] + 1) * (g.norm_degree[s] + 1)));
}

/// AGG over neighbor slots (no self term).
void aggregate_neighbors(const MessageGraph& g, const RowMap& map, Aggregation agg, const Matrix& m, Matrix& out,
                         IndexMatrix& argmax) {
  const Index width = m.cols();
  out.setZero(g.num_nodes, width);
  if (agg == Aggregation::max) argmax.setConstant(g.num_nodes, width, -1);
  for (NodeId u = 0; u < g.num_nodes; ++u) {
    const Index begin = g.offsets[u];
    const Index end = g.offsets[u + 1];
    if (begin == end) continue;
    switch (agg) {
      case Aggregation::sum:
      case Aggregation::mean:
        for (Index s = begin; s < end; ++s) out.row(u) += m.row(map.slot_row(s));
        if (agg == Aggregation::mean) out.row(u) /= static_cast<double>(end - begin);
        break;
      case Aggregation::max:
        out.row(u) = m.row(map.slot_row(begin));
        argmax.row(u).setConstant(begin);
        for (Index s = begin + 1; s < end; ++s) {
          const auto row = m.row(map.slot_row(s));
          for (Index c = 0; c < width; ++c) {
            if (row(c) > out(u, c)) {
              out(u, c) = row(c);
              argmax(u, c) = s;
            }
          }
        }
        break;
    }
  }
}

void aggregate_neighbors_backward(const MessageGraph& g, const RowMap& map, Aggregation agg, const Matrix& d_out,
                                  const IndexMatrix& argmax, Matrix& d_m) {
  for (NodeId u = 0; u < g.num_nodes; ++u) {
    const Index begin = g.offsets[u];
    const Index end = g.offsets[u + 1];
    if (begin == end) continue;
    switch (agg) {
      case Aggregation::sum:
        for (Index s = begin; s < end; ++s) d_m.row(map.slot_row(s)) += d_out.row(u);
        break;
      case Aggregation::mean: {
        const double w = 1.0 / static_cast<double>(end - begin);
        for (Index s = begin; s < end; ++s) d_m.row(map.slot_row(s)) += w * d_out.row(u);
        break;
      }
      case Aggregation::max:
        for (Index c = 0; c < d_out.cols(); ++c) d_m(map.slot_row(argmax(u, c)), c) += d_out(u, c);
        break;
    }
  }
}

}  // namespace

LayerTape layer_forward(const LayerParams& p, const ModelConfig& config, const MessageGraph& graph, Matrix input) {
  if (input.rows() != graph.num_nodes) throw InputError("layer input has wrong number of rows");
  if (graph.edge_dim() != config.edge_dim) {
    throw InputError("graph edge feature width " + std::to_string(graph.edge_dim()) + " differs from model edge_dim " +
                     std::to_string(config.edge_dim));
  }
  if (input.cols() + config.edge_dim != p.msg0_weight.rows()) {
    throw InputError("layer input width " + std::to_string(input.cols()) + " does not match the layer");
  }
  LayerTape t;
  t.input = std::move(input);
  const RowMap map{graph, config.edge_dim > 0};
  const Index n = graph.num_nodes;
  const Index in = t.input.cols();

  if (map.per_slot) {
    t.msg_input.setZero(map.rows(), in + config.edge_dim);
    for (Index s = 0; s < graph.num_slots(); ++s) {
      t.msg_input.row(s).head(in) = t.input.row(graph.senders[s]);
      t.msg_input.row(s).tail(config.edge_dim) = graph.slot_features.row(s);
    }
    for (NodeId u = 0; u < n; ++u) t.msg_input.row(map.self_row(u)).head(in) = t.input.row(u);
  }
  const Matrix& x = map.per_slot ? t.msg_input : t.input;

  t.msg_pre.noalias() = x * p.msg0_weight;
  t.msg_pre.rowwise() += p.msg0_bias.row(0);
  for (Index r = 0; r < map.rows(); ++r) {
    if (map.colored(r)) t.msg_pre.row(r).noalias() = x.row(r) * p.msg1_weight + p.msg1_bias;
  }
  t.messages = config.flavor == Flavor::sage ? relu(t.msg_pre) : t.msg_pre;

  switch (config.flavor) {
    case Flavor::sage:
      aggregate_neighbors(graph, map, config.aggregation, t.messages, t.aggregated, t.argmax);
      t.update_input.resize(n, t.aggregated.cols() + in);
      t.update_input << t.aggregated, t.input;
      t.pre_activation.noalias() = t.update_input * p.update_weight;
      t.pre_activation.rowwise() += p.update_bias.row(0);
      break;
    case Flavor::gcn:
      t.aggregated.setZero(n, t.messages.cols());
      for (NodeId u = 0; u < n; ++u) {
        for (Index s = graph.offsets[u]; s < graph.offsets[u + 1]; ++s) {
          t.aggregated.row(u) += gcn_coef(graph, u, graph.senders[s]) * t.messages.row(map.slot_row(s));
        }
        t.aggregated.row(u) += gcn_coef(graph, u, u) * t.messages.row(map.self_row(u));
      }
      t.pre_activation = t.aggregated;
      break;
    case Flavor::gin: {
      aggregate_neighbors(graph, map, config.aggregation, t.messages, t.aggregated, t.argmax);
      const double scale = 1.0 + p.gin_epsilon(0, 0);
      for (NodeId u = 0; u < n; ++u) t.aggregated.row(u) += scale * t.messages.row(map.self_row(u));
      t.update_input = relu(t.aggregated);
      t.pre_activation.noalias() = t.update_input * p.update_weight;
      t.pre_activation.rowwise() += p.update_bias.row(0);
      break;
    }
  }
  t.output = relu(t.pre_activation);
  return t;
}

Matrix layer_backward(const LayerParams& p, const ModelConfig& config, const MessageGraph& graph,
                      const LayerTape& t, const Matrix& d_output, LayerParams& grads) {
  const RowMap map{graph, config.edge_dim > 0};
  const Index n = graph.num_nodes;
  const Index in = t.input.cols();
  const Index width = t.messages.cols();

  const Matrix d_pre = d_output.cwiseProduct(relu_mask(t.pre_activation));
  Matrix d_input = Matrix::Zero(n, in);
  Matrix d_agg;

  switch (config.flavor) {
    case Flavor::sage: {
      grads.update_weight.noalias() += t.update_input.transpose() * d_pre;
      grads.update_bias += d_pre.colwise().sum();
      const Matrix d_cat = d_pre * p.update_weight.transpose();
      d_agg = d_cat.leftCols(width);
      d_input += d_cat.rightCols(in);
      break;
    }
    case Flavor::gcn: d_agg = d_pre; break;
    case Flavor::gin: {
      grads.update_weight.noalias() += t.update_input.transpose() * d_pre;
      grads.update_bias += d_pre.colwise().sum();
      d_agg = (d_pre * p.update_weight.transpose()).cwiseProduct(relu_mask(t.aggregated));
      break;
    }
  }

  Matrix d_messages = Matrix::Zero(map.rows(), width);
  switch (config.flavor) {
    case Flavor::sage: aggregate_neighbors_backward(graph, map, config.aggregation, d_agg, t.argmax, d_messages); break;
    case Flavor::gcn:
      for (NodeId u = 0; u < n; ++u) {
        for (Index s = graph.offsets[u]; s < graph.offsets[u + 1]; ++s) {
          d_messages.row(map.slot_row(s)) += gcn_coef(graph, u, graph.senders[s]) * d_agg.row(u);
        }
        d_messages.row(map.self_row(u)) += gcn_coef(graph, u, u) * d_agg.row(u);
      }
      break;
    case Flavor::gin: {
      aggregate_neighbors_backward(graph, map, config.aggregation, d_agg, t.argmax, d_messages);
      const double scale = 1.0 + p.gin_epsilon(0, 0);
      for (NodeId u = 0; u < n; ++u) {
        d_messages.row(map.self_row(u)) += scale * d_agg.row(u);
        grads.gin_epsilon(0, 0) += d_agg.row(u).dot(t.messages.row(map.self_row(u)));
      }
      break;
    }
  }

  Matrix d_msg_pre = config.flavor == Flavor::sage ? d_messages.cwiseProduct(relu_mask(t.msg_pre)) : d_messages;
  const Matrix& x = map.per_slot ? t.msg_input : t.input;

  // Split message rows by sender color.
  Matrix d_colored = Matrix::Zero(d_msg_pre.rows(), width);
  bool any_colored = false;
  for (Index r = 0; r < map.rows(); ++r) {
    if (map.colored(r)) {
      d_colored.row(r) = d_msg_pre.row(r);
      d_msg_pre.row(r).setZero();
      any_colored = true;
    }
  }
  grads.msg0_weight.noalias() += x.transpose() * d_msg_pre;
  grads.msg0_bias += d_msg_pre.colwise().sum();
  Matrix d_x = d_msg_pre * p.msg0_weight.transpose();
  if (any_colored) {
    grads.msg1_weight.noalias() += x.transpose() * d_colored;
    grads.msg1_bias += d_colored.colwise().sum();
    d_x.noalias() += d_colored * p.msg1_weight.transpose();
  }

  if (map.per_slot) {
    for (Index r = 0; r < map.rows(); ++r) d_input.row(map.sender_of_row(r)) += d_x.row(r).head(in);
  } else {
    d_input += d_x;
  }
  return d_input;
}

}  // namespace idgnn::nn
