#include "idgnn/nn/message_graph.hpp"

#include "idgnn/errors.hpp"

namespace idgnn::nn {

namespace {

MessageGraph build(const Graph& g, std::vector<bool> identity, std::vector<Index> norm_degree) {
  MessageGraph mg;
  mg.num_nodes = g.num_nodes();
  mg.offsets.assign(static_cast<std::size_t>(mg.num_nodes) + 1, 0);
  for (NodeId u = 0; u < mg.num_nodes; ++u) {
    const auto nb = g.neighbors(u);
    mg.senders.insert(mg.senders.end(), nb.begin(), nb.end());
    mg.offsets[u + 1] = static_cast<Index>(mg.senders.size());
  }
  if (g.edge_features()) {
    const auto& f = *g.edge_features();
    mg.slot_features.resize(mg.num_slots(), f.cols());
    for (NodeId u = 0; u < mg.num_nodes; ++u) {
      for (Index s = mg.offsets[u]; s < mg.offsets[u + 1]; ++s) {
        mg.slot_features.row(s) = f.row(*g.edge_index(u, mg.senders[s]));
      }
    }
  }
  mg.identity = std::move(identity);
  mg.norm_degree = std::move(norm_degree);
  return mg;
}

}  // namespace

MessageGraph make_message_graph(const Graph& g, std::optional<std::vector<bool>> identity_mask) {
  std::vector<bool> identity(static_cast<std::size_t>(g.num_nodes()), false);
  if (identity_mask) {
    if (static_cast<Index>(identity_mask->size()) != g.num_nodes()) throw InputError("identity mask size mismatch");
    identity = std::move(*identity_mask);
  }
  return build(g, std::move(identity), g.degrees());
}

MessageGraph make_message_graph(const EgoNet& ego) {
  return build(ego.subgraph, ego.identity_mask, ego.parent_degree);
}

}  // namespace idgnn::nn
