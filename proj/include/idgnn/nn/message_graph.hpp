#pragma once

#include "idgnn/graph.hpp"
#include "idgnn/nn/model.hpp"

#include <optional>
#include <vector>

namespace idgnn::nn {

/// Propagation structure for one forward pass: incoming neighbor slots per
/// receiver (CSR, senders ascending), the identity coloring, and the degrees
/// used by degree-normalized aggregation.
struct MessageGraph {
  Index num_nodes = 0;
  std::vector<Index> offsets;  ///< size num_nodes + 1
  std::vector<NodeId> senders;
  std::vector<bool> identity;
  /// Parent-graph degrees (equal to local degrees for whole graphs).
  std::vector<Index> norm_degree;
  /// Per-slot edge features (rows aligned with `senders`), or empty.
  Matrix slot_features;

  Index num_slots() const { return static_cast<Index>(senders.size()); }
  Index edge_dim() const { return slot_features.cols(); }
};

/// Whole graph, no identity coloring unless `identity_mask` is given.
MessageGraph make_message_graph(const Graph& g, std::optional<std::vector<bool>> identity_mask = std::nullopt);

/// Ego net with its identity mask and parent degrees.
MessageGraph make_message_graph(const EgoNet& ego);

}  // namespace idgnn::nn
