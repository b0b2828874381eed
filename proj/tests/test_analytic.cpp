#include <doctest.h>

#include "fixture.hpp"
#include "idgnn/errors.hpp"
#include "idgnn/walk_counts.hpp"
#include "oracles.hpp"

using namespace idgnn;
using namespace idgnn::analytic;

namespace {

std::vector<Count> row_of(const CountMatrixData& m, Index r) { return {m.row(r).begin(), m.row(r).end()}; }

}  // namespace

TEST_CASE("identity walk counts on K3 and K2") {
  const Graph k3 = fixture::k3();
  const auto c = lemma1_embeddings(extract_ego(k3, 0, 3), 3);
  CHECK(c.identity_node == 0);
  CHECK(row_of(c.counts, 0) == std::vector<Count>{0, 2, 2});
  CHECK(row_of(c.counts, 1) == std::vector<Count>{1, 1, 3});
  CHECK(row_of(c.counts, 2) == std::vector<Count>{1, 1, 3});

  const Graph k2 = fixture::graph_of(2, {{0, 1}});
  const auto e = lemma1_embeddings(extract_ego(k2, 1, 3), 3);
  CHECK(row_of(e.counts, 0) == std::vector<Count>{1, 0, 1});
  CHECK(e.counts(0, 2) == oracle::dense_adjacency(k2)(0, 1));
  CHECK(row_of(e.counts, 1) == std::vector<Count>{0, 1, 0});

  const Graph lone = fixture::graph_of(1, {});
  CHECK(lemma1_embeddings(extract_ego(lone, 0, 4), 4).counts.isZero());
}

TEST_CASE("identity walk counts need exactly one identity node") {
  const EgoNet outside = extract_ego(fixture::path_graph(4), 0, 2, NodeId{3});
  CHECK_THROWS_AS(lemma1_embeddings(outside, 2), InputError);
  CHECK_THROWS_AS(lemma1_embeddings(extract_ego(fixture::k3(), 0, 1), 0), InputError);
}

TEST_CASE("identity walk count matrix against walk enumeration") {
  for (std::uint64_t s = 0; s < 12; ++s) {
    const Graph g = fixture::random_graph(s, 10);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      const EgoNet ego = extract_ego(g, v, 4);
      const auto c = lemma1_embeddings(ego, 4);
      const auto a = oracle::dense_adjacency(ego.subgraph);
      oracle::LongMatrix p = oracle::LongMatrix::Identity(a.rows(), a.cols());
      for (Index j = 1; j <= 4; ++j) {
        p = p * a;
        for (NodeId u = 0; u < ego.subgraph.num_nodes(); ++u) CHECK(c.counts(u, j - 1) == p(u, c.identity_node));
      }
      for (Index j = 1; j <= 4; ++j) {
        CHECK(c.counts(c.identity_node, j - 1) == oracle::closed_walks_by_enumeration(g, v, j));
      }
    }
  }
}

TEST_CASE("walk count features against dense powers") {
  CHECK(walk_count_features(fixture::k3(), 3) == (CountMatrixData(3, 3) << 0, 2, 2, 0, 2, 2, 0, 2, 2).finished());
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Graph g = fixture::random_graph(s);
    const auto f = walk_count_features(g, 6);
    const auto o = oracle::closed_walks_by_power(g, 6);
    CHECK(f == o.cast<Count>());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      CHECK(f(v, 0) == 0);
      CHECK(f(v, 1) == g.degree(v));
      const auto l = lemma1_embeddings(extract_ego(g, v, 6), 6);
      CHECK(l.counts.row(l.identity_node) == f.row(v));
    }
  }
  const auto tf = walk_count_features(fixture::c6(), 3);
  CHECK(tf.col(2).isZero());
}

TEST_CASE("walk counts overflow loudly") {
  std::vector<Edge> e;
  for (NodeId u = 0; u < 60; ++u)
    for (NodeId v = u + 1; v < 60; ++v) e.emplace_back(u, v);
  const Graph g = build_graph(60, e);
  CHECK_THROWS_AS(walk_count_features(g, 14), NumericError);
  CHECK_NOTHROW(walk_count_features(g, 8));
}

TEST_CASE("generic layer agrees across scalar types") {
  const Graph g = fixture::random_graph(4, 20);
  const EgoNet ego = extract_ego(g, 0, 3);
  const auto ai = adjacency_matrix<Count>(ego.subgraph);
  const auto ad = adjacency_matrix<double>(ego.subgraph);
  DenseT<Count> hi = DenseT<Count>::Ones(ego.subgraph.num_nodes(), 1);
  DenseT<double> hd = DenseT<double>::Ones(ego.subgraph.num_nodes(), 1);
  const auto wi = walk_count_layer_weights<Count>(3);
  const auto wd = walk_count_layer_weights<double>(3);
  for (std::size_t i = 0; i < wi.size(); ++i) {
    hi = heterogeneous_sum_layer(ai, hi, ego.identity_mask, wi[i]);
    hd = heterogeneous_sum_layer(ad, hd, ego.identity_mask, wd[i]);
  }
  CHECK(hd == hi.cast<double>());
}

TEST_CASE("clustering from counts") {
  CHECK(clustering_from_counts(std::vector<Count>{0, 2, 2}) == 1.0);
  CHECK(clustering_from_counts(std::vector<Count>{0, 3, 0}) == 0.0);
  CHECK(clustering_ratio_from_counts(std::vector<Count>{0, 3, 2}) == make_rational(1, 3));
  CHECK(clustering_ratio_from_counts(std::vector<Count>{0, 1, 0}) == make_rational(0, 1));
  CHECK(clustering_direct(fixture::k3(), 1) == 1.0);
  CHECK(clustering_direct(fixture::path_graph(3), 1) == 0.0);
  CHECK(clustering_direct(fixture::graph_of(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}), 2) == 1.0);
  CHECK(clustering_ratio_direct(fixture::paw(), 0) == make_rational(1, 3));
}

TEST_CASE("clustering equivalence against triangle oracle") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const Graph g = fixture::random_graph(s);
    const auto f = walk_count_features(g, 3);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      const Index d = g.degree(v);
      if (d < 2) continue;
      const auto r = row_of(f, v);
      const Rational via_counts = clustering_ratio_from_counts(r);
      CHECK(via_counts == clustering_ratio_direct(g, v));
      CHECK(via_counts == make_rational(2 * oracle::triangles_at(g, v), d * (d - 1)));
    }
  }
}

TEST_CASE("reachability") {
  const Graph p = fixture::path_graph(3);
  CHECK(reachability(p, 2, 0, 2));
  CHECK_FALSE(reachability(p, 2, 0, 1));
  const Graph two = fixture::graph_of(4, {{0, 1}, {2, 3}});
  for (Index k = 0; k < 6; ++k) CHECK_FALSE(reachability(two, 0, 3, k));
  CHECK(reachability(p, 1, 1, 2));
  CHECK_FALSE(reachability(p, 1, 1, 1));
  CHECK_FALSE(reachability(fixture::graph_of(2, {}), 0, 0, 4));
}

TEST_CASE("reachability against floyd warshall") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Graph g = fixture::random_graph(s, 24);
    const auto d = oracle::floyd_warshall(g);
    for (Index k = 0; k <= 6; ++k) {
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        const auto r = reachability_vector(g, v, k);
        for (NodeId u = 0; u < g.num_nodes(); ++u) {
          if (u == v) {
            CHECK((r[u] == 1) == (k >= 2 && g.degree(v) > 0));
          } else {
            CHECK((r[u] == 1) == (d[v][u] >= 0 && d[v][u] <= k));
          }
        }
      }
    }
  }
}

TEST_CASE("graph signatures") {
  CHECK(graph_signature(fixture::two_triangles(), 3) != graph_signature(fixture::c6(), 3));
  CHECK(graph_signature(fixture::two_triangles(), 2) == graph_signature(fixture::c6(), 2));
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Graph g = fixture::random_graph(s);
    const auto sig = graph_signature(g, 6);
    for (std::uint64_t t = 0; t < 100; ++t) {
      CHECK(graph_signature(g.relabeled(fixture::random_perm(g.num_nodes(), t)), 6) == sig);
    }
  }
}
