#pragma once

#include "idgnn/errors.hpp"
#include "idgnn/graph.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <algorithm>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

// "Paths" and "cycles" in the identity-aware GNN construction are walks and
// closed walks: the layer recursion sums neighbor counts, which is exactly
// (A^j)[u][v], and Diag(A^j) counts closed walks. Everything here is exact
// integer arithmetic with overflow detection.

namespace idgnn::analytic {

template <class Scalar>
using DenseT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class Scalar>
using SparseT = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

using Count = std::int64_t;
using CountMatrixData = DenseT<Count>;

template <class Scalar>
SparseT<Scalar> adjacency_matrix(const Graph& g) {
  std::vector<Eigen::Triplet<Scalar>> triplets;
  triplets.reserve(static_cast<std::size_t>(2 * g.num_edges()));
  for (const auto& [u, v] : g.edges()) {
    triplets.emplace_back(u, v, Scalar(1));
    triplets.emplace_back(v, u, Scalar(1));
  }
  SparseT<Scalar> a(g.num_nodes(), g.num_nodes());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

/// Linear message functions of one heterogeneous layer. `w0/b0` act on
/// nodes without identity coloring, `w1/b1` on the colored node. Weights
/// are (in_dim × out_dim); biases are (1 × out_dim).
template <class Scalar>
struct LinearMessageWeights {
  DenseT<Scalar> w0, b0, w1, b1;
};

namespace detail {
__extension__ typedef __int128 wide_int;

template <class Derived>
Count max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? Count(0) : m.cwiseAbs().maxCoeff();
}

}  // namespace detail

/// One round of heterogeneous message passing with SUM aggregation:
///   m_s = h_s W_{1[s colored]} + b_{1[s colored]},  h'_u = Σ_{s ∈ N(u)} m_s.
/// Integral scalars are checked against overflow before computing.
template <class Scalar>
DenseT<Scalar> heterogeneous_sum_layer(const SparseT<Scalar>& adjacency, const DenseT<Scalar>& h,
                                       const std::vector<bool>& identity_mask,
                                       const LinearMessageWeights<Scalar>& w) {
  const Index n = h.rows();
  if (adjacency.rows() != n || static_cast<Index>(identity_mask.size()) != n) {
    throw InputError("heterogeneous_sum_layer: size mismatch");
  }
  if (w.w0.rows() != h.cols() || w.w1.rows() != h.cols() || w.w0.cols() != w.w1.cols() ||
      w.b0.cols() != w.w0.cols() || w.b1.cols() != w.w0.cols()) {
    throw InputError("heterogeneous_sum_layer: weight shapes do not match the input width");
  }
  if constexpr (std::is_integral_v<Scalar>) {
    // |h W + b| <= |h|max·|W|max·in + |b|max, then summed over <= max degree terms.
    Index max_deg = 0;
    for (Index r = 0; r < n; ++r) max_deg = std::max<Index>(max_deg, adjacency.outerIndexPtr()[r + 1] - adjacency.outerIndexPtr()[r]);
    const detail::wide_int wmax = std::max(detail::max_abs(w.w0), detail::max_abs(w.w1));
    const detail::wide_int bmax = std::max(detail::max_abs(w.b0), detail::max_abs(w.b1));
    const detail::wide_int bound = (static_cast<detail::wide_int>(detail::max_abs(h)) * wmax * std::max<Index>(h.cols(), 1) + bmax) *
                           std::max<Index>(max_deg, 1);
    if (bound > static_cast<detail::wide_int>(std::numeric_limits<Scalar>::max())) {
      throw NumericError("walk count overflow: counts exceed the 64-bit integer range");
    }
  }
  DenseT<Scalar> messages(n, w.w0.cols());
  for (Index s = 0; s < n; ++s) {
    if (identity_mask[s]) {
      messages.row(s).noalias() = h.row(s) * w.w1 + w.b1;
    } else {
      messages.row(s).noalias() = h.row(s) * w.w0 + w.b0;
    }
  }
  return adjacency * messages;
}

/// The explicit walk-counting weights for a stack of `k` heterogeneous
/// layers on scalar input x = [1]. Layer 1 has W0 = W1 = 0, b0 = 0, b1 = [1];
/// layer j >= 2 maps R^{j-1} -> R^j with W0 = W1 = [0 | I] (shift by one
/// slot) and b0 = 0, b1 = e_1.
template <class Scalar>
std::vector<LinearMessageWeights<Scalar>> walk_count_layer_weights(Index k) {
  if (k < 1) throw InputError("walk_count_layer_weights: k must be >= 1");
  std::vector<LinearMessageWeights<Scalar>> layers;
  for (Index j = 1; j <= k; ++j) {
    const Index in = j == 1 ? 1 : j - 1;
    LinearMessageWeights<Scalar> w;
    w.w0 = DenseT<Scalar>::Zero(in, j);
    if (j >= 2) w.w0.rightCols(j - 1).setIdentity();
    w.w1 = w.w0;
    w.b0 = DenseT<Scalar>::Zero(1, j);
    w.b1 = DenseT<Scalar>::Zero(1, j);
    w.b1(0, 0) = Scalar(1);
    layers.push_back(std::move(w));
  }
  return layers;
}

/// counts(u, j-1) = number of length-j walks from local node u to the
/// identity node, j = 1..k_max.
struct CountMatrix {
  CountMatrixData counts;
  Index identity_node = 0;
  Index k_max = 0;
};

/// Runs k rounds of the explicit-weight heterogeneous message passing on the
/// ego net. Requires exactly one identity-colored node.
CountMatrix lemma1_embeddings(const EgoNet& ego, Index k);

/// Column j-1 holds Diag(A^j): closed walks of length j at each node.
CountMatrixData walk_count_features(const Graph& g, Index k);

/// Exact nonnegative fraction, reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational make_rational(std::int64_t num, std::int64_t den);

/// c_v = counts[3] / (counts[2]·(counts[2]−1)) from a closed-walk row
/// (index 0 holds length 1). Zero when the degree counts[2] is below 2.
Rational clustering_ratio_from_counts(std::span<const Count> row);
double clustering_from_counts(std::span<const Count> row);

/// Edges among neighbors divided by deg·(deg−1)/2; zero when deg < 2.
Rational clustering_ratio_direct(const Graph& g, NodeId v);
double clustering_direct(const Graph& g, NodeId v);

/// The max-propagation reachability rule: h^(0) = 0; the colored node `v`
/// sends the constant 1, everyone else forwards its previous value; each
/// node takes the MAX over its neighbors' messages. Returns h_{u|v}^(k) == 1.
///
/// For u == v this is 1 whenever k >= 2 and v has a neighbor (a closed
/// walk returns to v), which differs from "zero hops to itself".
bool reachability(const Graph& g, NodeId u, NodeId v, Index k);

/// The full h_{·|v}^(k) vector of the propagation above.
std::vector<std::uint8_t> reachability_vector(const Graph& g, NodeId v, Index k);

/// Lexicographically sorted closed-walk rows (lengths 1..k), serialized as
/// little-endian int64: n, k, then the sorted rows. Isomorphic graphs get
/// equal signatures.
std::string graph_signature(const Graph& g, Index k);

}  // namespace idgnn::analytic
