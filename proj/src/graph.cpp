#include "idgnn/graph.hpp"

#include "idgnn/errors.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace idgnn {

namespace {

void check_node(const Graph& g, NodeId v, const char* what) {
  if (v < 0 || v >= g.num_nodes()) {
    throw InputError(std::string(what) + " " + std::to_string(v) + " out of range for graph with " +
                     std::to_string(g.num_nodes()) + " nodes");
  }
}

}  // namespace

std::span<const NodeId> Graph::neighbors(NodeId v) const {
  check_node(*this, v, "node");
  const auto begin = static_cast<std::size_t>(offsets_[v]);
  const auto end = static_cast<std::size_t>(offsets_[v + 1]);
  return {adjacency_.data() + begin, end - begin};
}

Index Graph::degree(NodeId v) const {
  check_node(*this, v, "node");
  return offsets_[v + 1] - offsets_[v];
}

std::vector<Index> Graph::degrees() const {
  std::vector<Index> out(static_cast<std::size_t>(num_nodes()));
  for (Index v = 0; v < num_nodes(); ++v) out[v] = offsets_[v + 1] - offsets_[v];
  return out;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  if (u < 0 || v < 0 || u >= num_nodes() || v >= num_nodes()) return false;
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<Index> Graph::edge_index(NodeId u, NodeId v) const {
  const Edge key{std::min(u, v), std::max(u, v)};
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<Index>(it - edges_.begin());
}

Graph Graph::with_node_features(std::optional<FeatureMatrix> x) const {
  if (x && x->rows() != num_nodes()) {
    throw InputError("node_features has " + std::to_string(x->rows()) + " rows, expected " +
                     std::to_string(num_nodes()));
  }
  Graph out = *this;
  out.node_features_ = std::move(x);
  return out;
}

Graph Graph::with_edge_features(std::optional<FeatureMatrix> f) const {
  if (f && f->rows() != num_edges()) {
    throw InputError("edge_features has " + std::to_string(f->rows()) + " rows, expected " +
                     std::to_string(num_edges()));
  }
  Graph out = *this;
  out.edge_features_ = std::move(f);
  return out;
}

Graph Graph::relabeled(std::span<const NodeId> perm) const {
  const Index n = num_nodes();
  if (static_cast<Index>(perm.size()) != n) throw InputError("permutation size mismatch");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (NodeId p : perm) {
    if (p < 0 || p >= n || seen[p]) throw InputError("not a permutation");
    seen[p] = true;
  }
  std::vector<Edge> mapped;
  mapped.reserve(edges_.size());
  for (const auto& [u, v] : edges_) mapped.emplace_back(perm[u], perm[v]);

  std::optional<FeatureMatrix> x;
  if (node_features_) {
    x = FeatureMatrix(node_features_->rows(), node_features_->cols());
    for (Index v = 0; v < n; ++v) x->row(perm[v]) = node_features_->row(v);
  }
  Graph out = build_graph(n, mapped, std::move(x));
  if (edge_features_) {
    FeatureMatrix f(edge_features_->rows(), edge_features_->cols());
    for (Index e = 0; e < num_edges(); ++e) {
      f.row(*out.edge_index(mapped[e].first, mapped[e].second)) = edge_features_->row(e);
    }
    out.edge_features_ = std::move(f);
  }
  return out;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.num_nodes() != b.num_nodes() || a.edges_ != b.edges_) return false;
  const auto same = [](const std::optional<FeatureMatrix>& x, const std::optional<FeatureMatrix>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->rows() == y->rows() && x->cols() == y->cols() && *x == *y;
  };
  return same(a.node_features_, b.node_features_) && same(a.edge_features_, b.edge_features_);
}

Graph build_graph(Index num_nodes, std::span<const Edge> edges, std::optional<FeatureMatrix> node_features) {
  if (num_nodes < 0) throw InputError("num_nodes must be nonnegative");
  if (node_features && node_features->rows() != num_nodes) {
    throw InputError("node_features has " + std::to_string(node_features->rows()) + " rows, expected " +
                     std::to_string(num_nodes));
  }
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes) {
      throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") has endpoint out of range [0, " +
                       std::to_string(num_nodes) + ")");
    }
    if (u == v) continue;
    canon.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(canon.begin(), canon.end());
  canon.erase(std::unique(canon.begin(), canon.end()), canon.end());

  Graph g;
  g.offsets_.assign(static_cast<std::size_t>(num_nodes) + 1, 0);
  for (const auto& [u, v] : canon) {
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (Index v = 0; v < num_nodes; ++v) g.offsets_[v + 1] += g.offsets_[v];
  g.adjacency_.resize(canon.size() * 2);
  std::vector<Index> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Canonical edges are sorted by (u, v); filling in that order leaves every
  // list sorted except for the entries contributed as the second endpoint.
  for (const auto& [u, v] : canon) {
    g.adjacency_[cursor[u]++] = v;
    g.adjacency_[cursor[v]++] = u;
  }
  for (Index v = 0; v < num_nodes; ++v) {
    std::sort(g.adjacency_.begin() + g.offsets_[v], g.adjacency_.begin() + g.offsets_[v + 1]);
  }
  g.edges_ = std::move(canon);
  g.node_features_ = std::move(node_features);
  return g;
}

std::vector<std::optional<Index>> bfs_distances(const Graph& g, NodeId source, Index cap) {
  check_node(g, source, "source");
  if (cap < 0) throw InputError("cap must be nonnegative");
  std::vector<std::optional<Index>> dist(static_cast<std::size_t>(g.num_nodes()));
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (*dist[u] == cap) continue;
    for (NodeId w : g.neighbors(u)) {
      if (!dist[w]) {
        dist[w] = *dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::optional<Index> EgoNet::identity_node() const {
  const auto it = std::find(identity_mask.begin(), identity_mask.end(), true);
  if (it == identity_mask.end()) return std::nullopt;
  return static_cast<Index>(it - identity_mask.begin());
}

EgoNet extract_ego(const Graph& g, NodeId center, Index k, std::optional<NodeId> identity_at) {
  check_node(g, center, "center");
  if (identity_at) check_node(g, *identity_at, "identity node");
  const auto dist = bfs_distances(g, center, k);

  EgoNet ego;
  std::vector<Index> local(static_cast<std::size_t>(g.num_nodes()), -1);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (dist[v]) {
      local[v] = static_cast<Index>(ego.to_parent.size());
      ego.to_parent.push_back(v);
    }
  }
  const Index n_local = static_cast<Index>(ego.to_parent.size());

  std::vector<Edge> sub_edges;
  std::vector<Index> parent_edge_rows;
  for (Index e = 0; e < g.num_edges(); ++e) {
    const auto& [u, v] = g.edges()[e];
    if (local[u] >= 0 && local[v] >= 0) {
      sub_edges.emplace_back(local[u], local[v]);
      parent_edge_rows.push_back(e);
    }
  }

  std::optional<FeatureMatrix> x;
  if (g.node_features()) {
    x = FeatureMatrix(n_local, g.node_features()->cols());
    for (Index i = 0; i < n_local; ++i) x->row(i) = g.node_features()->row(ego.to_parent[i]);
  }
  ego.subgraph = build_graph(n_local, sub_edges, std::move(x));
  if (g.edge_features()) {
    // Local ids preserve parent order, so induced edges keep canonical order.
    FeatureMatrix f(static_cast<Index>(parent_edge_rows.size()), g.edge_features()->cols());
    for (Index i = 0; i < f.rows(); ++i) f.row(i) = g.edge_features()->row(parent_edge_rows[i]);
    ego.subgraph = ego.subgraph.with_edge_features(std::move(f));
  }

  ego.center_local_index = local[center];
  ego.identity_mask.assign(static_cast<std::size_t>(n_local), false);
  const NodeId colored = identity_at.value_or(center);
  if (local[colored] >= 0) ego.identity_mask[local[colored]] = true;
  ego.parent_degree.resize(static_cast<std::size_t>(n_local));
  for (Index i = 0; i < n_local; ++i) ego.parent_degree[i] = g.degree(ego.to_parent[i]);
  return ego;
}

}  // namespace idgnn
