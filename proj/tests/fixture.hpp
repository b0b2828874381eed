#pragma once

#include "idgnn/generators.hpp"
#include "idgnn/graph.hpp"
#include "idgnn/random.hpp"

#include <string>
#include <vector>

namespace fixture {

using namespace idgnn;

// Mixed-family random graph with 8..40 nodes.
inline Graph random_graph(std::uint64_t seed, Index n_max = 40) {
  Rng rng(derive_seed(seed, 77));
  const Index n = 8 + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(n_max - 7)));
  switch (seed % 3) {
    case 0: {
      Index d = 3 + static_cast<Index>(rng.uniform_below(3));
      if ((n * d) % 2 == 1) ++d;
      return synth::gen_d_regular(n, d, seed);
    }
    case 1: return synth::gen_small_world(n, 4, rng.uniform(0.0, 0.6), seed);
    default: return synth::gen_scale_free(n, 1 + static_cast<Index>(rng.uniform_below(3)), rng.uniform01(), seed);
  }
}

inline Graph graph_of(Index n, std::vector<Edge> edges) { return build_graph(n, edges); }

inline Graph k3() { return graph_of(3, {{0, 1}, {1, 2}, {0, 2}}); }
inline Graph two_triangles() { return graph_of(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}); }
inline Graph c6() { return graph_of(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}}); }
inline Graph paw() { return graph_of(4, {{0, 1}, {0, 2}, {1, 2}, {0, 3}}); }
inline Graph path_graph(Index n) {
  std::vector<Edge> e;
  for (Index i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return build_graph(n, e);
}
inline Graph star(Index leaves) {
  std::vector<Edge> e;
  for (Index i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return build_graph(leaves + 1, e);
}

inline std::vector<NodeId> random_perm(Index n, std::uint64_t seed) {
  std::vector<NodeId> p(n);
  for (Index i = 0; i < n; ++i) p[i] = i;
  Rng(seed).shuffle(p.begin(), p.end());
  return p;
}

}  // namespace fixture
