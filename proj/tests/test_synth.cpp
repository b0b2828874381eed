#include <doctest.h>

#include "fixture.hpp"
#include "idgnn/errors.hpp"
#include "idgnn/generators.hpp"
#include "idgnn/graph_io.hpp"
#include "idgnn/walk_counts.hpp"
#include "idgnn/wl.hpp"

using namespace idgnn;

TEST_CASE("d-regular") {
  const Graph k4 = synth::gen_d_regular(4, 3, 11);
  CHECK(k4.num_edges() == 6);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Graph g = synth::gen_d_regular(40, 5, s);
    for (Index d : g.degrees()) CHECK(d == 5);
  }
  CHECK_THROWS_AS(synth::gen_d_regular(5, 3, 0), InputError);
  CHECK_THROWS_AS(synth::gen_d_regular(4, 4, 0), InputError);
  CHECK(synth::gen_d_regular(64, 4, 9) == synth::gen_d_regular(64, 4, 9));
}

TEST_CASE("small-world") {
  const Graph lattice = synth::gen_small_world(10, 4, 0.0, 3);
  for (NodeId v = 0; v < 10; ++v) {
    CHECK(lattice.degree(v) == 4);
    CHECK(analytic::clustering_ratio_direct(lattice, v) == analytic::make_rational(1, 2));
  }
  const Graph g = synth::gen_small_world(200, 4, 0.3, 1);
  CHECK(g.num_edges() == 400);
  CHECK_THROWS_AS(synth::gen_small_world(10, 3, 0.1, 0), InputError);
  CHECK_THROWS_AS(synth::gen_small_world(4, 4, 0.1, 0), InputError);
}

TEST_CASE("scale-free") {
  const Graph tree = synth::gen_scale_free(5, 1, 0.0, 2);
  CHECK(tree.num_edges() == 4);
  CHECK(bfs_distances(tree, 0, 5)[4].has_value());
  const Graph g = synth::gen_scale_free(100, 2, 0.5, 3);
  const double avg = 2.0 * static_cast<double>(g.num_edges()) / 100.0;
  CHECK(avg == doctest::Approx(4.0).epsilon(0.05));
  for (Index n : {10, 30}) {
    for (Index m : {1, 2, 3}) {
      const Graph h = synth::gen_scale_free(n, m, 0.7, n * m);
      CHECK(h.num_edges() == m * (n - m) + m * (m - 1) / 2);
      const auto d = bfs_distances(h, 0, n);
      for (const auto& x : d) CHECK(x.has_value());
    }
  }
  CHECK_THROWS_AS(synth::gen_scale_free(3, 4, 0.5, 0), InputError);
}

TEST_CASE("datasets are deterministic and seed dependent") {
  synth::GeneratorSpec spec;
  spec.family = synth::Family::small_world;
  spec.num_nodes = 20;
  spec.num_nodes_max = 30;
  spec.degree_param = 4;
  spec.prob = 0.2;
  const auto a = synth::gen_dataset(spec, 16, 1);
  const auto b = synth::gen_dataset(spec, 16, 1);
  const auto c = synth::gen_dataset(spec, 16, 2);
  CHECK(dataset_to_jsonl(a) == dataset_to_jsonl(b));
  Index same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].graph.num_nodes() >= 20);
    CHECK(a[i].graph.num_nodes() <= 30);
    same += wl::wl_graph_hash(a[i].graph) == wl::wl_graph_hash(c[i].graph);
  }
  CHECK(same < 2);

  spec.family = synth::Family::d_regular;
  spec.num_nodes = 64;
  spec.num_nodes_max = 0;
  spec.prob = 0.0;
  for (const auto& r : synth::gen_dataset(spec, 10, 5))
    for (Index d : r.graph.degrees()) CHECK(d == 4);
}
