#include "idgnn/walk_counts.hpp"

#include <algorithm>
#include <numeric>

namespace idgnn::analytic {

CountMatrix lemma1_embeddings(const EgoNet& ego, Index k) {
  if (k < 1) throw InputError("lemma1_embeddings: k must be >= 1");
  const auto colored = std::count(ego.identity_mask.begin(), ego.identity_mask.end(), true);
  if (colored != 1) {
    throw InputError("lemma1_embeddings: ego net must have exactly one identity node (found " +
                     std::to_string(colored) + ")");
  }
  const Index n = ego.subgraph.num_nodes();
  const auto adjacency = adjacency_matrix<Count>(ego.subgraph);
  CountMatrixData h = CountMatrixData::Ones(n, 1);
  for (const auto& layer : walk_count_layer_weights<Count>(k)) {
    h = heterogeneous_sum_layer<Count>(adjacency, h, ego.identity_mask, layer);
  }
  return CountMatrix{std::move(h), *ego.identity_node(), k};
}

CountMatrixData walk_count_features(const Graph& g, Index k) {
  if (k < 1) throw InputError("walk_count_features: k must be >= 1");
  const Index n = g.num_nodes();
  CountMatrixData out = CountMatrixData::Zero(n, k);
  if (n == 0) return out;
  const auto adjacency = adjacency_matrix<Count>(g);
  Index max_deg = 0;
  for (Index v = 0; v < n; ++v) max_deg = std::max(max_deg, g.degree(v));

  // Propagate a block of unit columns at a time: P <- A P, read the diagonal.
  constexpr Index kBlock = 256;
  for (Index c0 = 0; c0 < n; c0 += kBlock) {
    const Index width = std::min(kBlock, n - c0);
    CountMatrixData p = CountMatrixData::Zero(n, width);
    for (Index i = 0; i < width; ++i) p(c0 + i, i) = 1;
    for (Index j = 0; j < k; ++j) {
      const detail::wide_int bound = static_cast<detail::wide_int>(p.cwiseAbs().maxCoeff()) * std::max<Index>(max_deg, 1);
      if (bound > std::numeric_limits<Count>::max()) {
        throw NumericError("walk count overflow at length " + std::to_string(j + 1));
      }
      p = adjacency * p;
      for (Index i = 0; i < width; ++i) out(c0 + i, j) = p(c0 + i, i);
    }
  }
  return out;
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InputError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const auto g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

Rational clustering_ratio_from_counts(std::span<const Count> row) {
  if (row.size() < 3) throw InputError("clustering_from_counts needs closed-walk counts up to length 3");
  const Count degree = row[1];
  if (degree < 2) return {0, 1};
  return make_rational(row[2], degree * (degree - 1));
}

double clustering_from_counts(std::span<const Count> row) { return clustering_ratio_from_counts(row).value(); }

Rational clustering_ratio_direct(const Graph& g, NodeId v) {
  const auto nb = g.neighbors(v);
  const auto deg = static_cast<std::int64_t>(nb.size());
  if (deg < 2) return {0, 1};
  std::int64_t links = 0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      if (g.has_edge(nb[i], nb[j])) ++links;
    }
  }
  return make_rational(links, deg * (deg - 1) / 2);
}

double clustering_direct(const Graph& g, NodeId v) { return clustering_ratio_direct(g, v).value(); }

std::vector<std::uint8_t> reachability_vector(const Graph& g, NodeId v, Index k) {
  if (v < 0 || v >= g.num_nodes()) throw InputError("reachability: node out of range");
  if (k < 0) throw InputError("reachability: k must be nonnegative");
  const Index n = g.num_nodes();
  std::vector<std::uint8_t> h(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> next(h.size());
  for (Index round = 0; round < k; ++round) {
    for (NodeId u = 0; u < n; ++u) {
      std::uint8_t best = 0;
      for (NodeId s : g.neighbors(u)) best = std::max<std::uint8_t>(best, s == v ? 1 : h[s]);
      next[u] = best;
    }
    h.swap(next);
  }
  return h;
}

bool reachability(const Graph& g, NodeId u, NodeId v, Index k) {
  if (u < 0 || u >= g.num_nodes()) throw InputError("reachability: node out of range");
  return reachability_vector(g, v, k)[u] == 1;
}

std::string graph_signature(const Graph& g, Index k) {
  const CountMatrixData counts = walk_count_features(g, k);
  std::vector<std::vector<Count>> rows(static_cast<std::size_t>(counts.rows()));
  for (Index v = 0; v < counts.rows(); ++v) rows[v].assign(counts.row(v).begin(), counts.row(v).end());
  std::sort(rows.begin(), rows.end());

  std::string out;
  const auto put = [&out](std::int64_t x) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((static_cast<std::uint64_t>(x) >> (8 * b)) & 0xff));
  };
  put(counts.rows());
  put(k);
  for (const auto& r : rows) {
    for (Count c : r) put(c);
  }
  return out;
}

}  // namespace idgnn::analytic
