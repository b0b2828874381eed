#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace idgnn {

using Index = Eigen::Index;
using NodeId = Eigen::Index;
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Undirected edge stored with `first < second`.
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph in compressed (CSR) adjacency form.
///
/// Neighbor lists are sorted ascending and symmetric. Edges are kept in
/// canonical order (`u < v`, lexicographic) and edge feature rows, when
/// present, follow that order.
class Graph {
 public:
  Graph() = default;

  Index num_nodes() const noexcept { return static_cast<Index>(offsets_.empty() ? 0 : offsets_.size() - 1); }
  Index num_edges() const noexcept { return static_cast<Index>(edges_.size()); }

  std::span<const NodeId> neighbors(NodeId v) const;
  Index degree(NodeId v) const;
  std::vector<Index> degrees() const;
  bool has_edge(NodeId u, NodeId v) const;

  /// Position of `{u, v}` in `edges()`, or nullopt.
  std::optional<Index> edge_index(NodeId u, NodeId v) const;

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::optional<FeatureMatrix>& node_features() const noexcept { return node_features_; }
  const std::optional<FeatureMatrix>& edge_features() const noexcept { return edge_features_; }

  /// Copy with node features replaced. Row count must equal num_nodes().
  Graph with_node_features(std::optional<FeatureMatrix> x) const;
  /// Copy with edge features replaced. Row count must equal num_edges().
  Graph with_edge_features(std::optional<FeatureMatrix> f) const;

  /// Copy with node `v` renamed to `perm[v]`. Features are permuted along.
  Graph relabeled(std::span<const NodeId> perm) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  friend Graph build_graph(Index, std::span<const Edge>, std::optional<FeatureMatrix>);

  std::vector<Index> offsets_;
  std::vector<NodeId> adjacency_;
  std::vector<Edge> edges_;
  std::optional<FeatureMatrix> node_features_;
  std::optional<FeatureMatrix> edge_features_;
};

/// Builds a simple graph. Self-loops are dropped and duplicate (or reversed)
/// edges collapse. Throws InputError on out-of-range endpoints or a
/// node-feature row count that differs from `num_nodes`.
Graph build_graph(Index num_nodes, std::span<const Edge> edges,
                  std::optional<FeatureMatrix> node_features = std::nullopt);

/// BFS hop distances from `source`, limited to `cap` hops. Nodes farther
/// than `cap` (or unreachable) are nullopt.
std::vector<std::optional<Index>> bfs_distances(const Graph& g, NodeId source, Index cap);

/// Induced subgraph on the K-hop ball around a center node, with local ids
/// assigned in increasing parent-id order.
///
/// `identity_mask` marks the node whose outgoing messages use the identity
/// message function. It normally has exactly one true entry. When the
/// conditioning node requested through `extract_ego(..., identity_at)` lies
/// outside the ball, the mask is all false: the ego net then carries no
/// identity information at all.
struct EgoNet {
  Graph subgraph;
  Index center_local_index = 0;
  std::vector<NodeId> to_parent;
  std::vector<bool> identity_mask;
  /// Degree of each local node in the parent graph. Boundary nodes lose
  /// edges in the induced subgraph; degree-normalized aggregations use this.
  std::vector<Index> parent_degree;

  /// Local id of the identity-colored node, if any.
  std::optional<Index> identity_node() const;
};

EgoNet extract_ego(const Graph& g, NodeId center, Index k,
                   std::optional<NodeId> identity_at = std::nullopt);

}  // namespace idgnn
