#pragma once

#include "idgnn/graph.hpp"
#include "idgnn/graph_io.hpp"

#include <cstdint>
#include <string>

namespace idgnn::synth {

enum class Family { d_regular, small_world, scale_free };

std::string to_string(Family f);
/// Accepts "d_regular"/"d-regular", "small_world"/"small-world", "scale_free"/"scale-free".
Family family_from_string(const std::string& s);

/// Parameters for one synthetic family. `degree_param` is d (d-regular),
/// the ring neighbor count k (small-world) or the attachment count m
/// (scale-free). `prob` is the rewiring probability or the triad-formation
/// probability; it is ignored for d-regular.
struct GeneratorSpec {
  Family family = Family::small_world;
  Index num_nodes = 0;
  /// When > num_nodes, each graph draws its size uniformly from [num_nodes, num_nodes_max].
  Index num_nodes_max = 0;
  Index degree_param = 0;
  double prob = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Random d-regular graph by the pairing (configuration) model, restarting
/// from scratch whenever a self-loop or multi-edge appears.
/// `restarts`, if given, receives the number of discarded pairings.
Graph gen_d_regular(Index n, Index d, std::uint64_t seed, std::uint64_t* restarts = nullptr);

/// Watts–Strogatz: ring lattice with k nearest neighbors (k even), each
/// lattice edge rewired with probability p to a uniformly chosen new endpoint
/// that creates neither a self-loop nor a duplicate.
Graph gen_small_world(Index n, Index k, double p, std::uint64_t seed);

/// Holme–Kim growth: seed clique on m nodes, then each new node attaches m
/// edges. The first goes to a degree-proportional target; each further one
/// closes a triad with a random neighbor of the previous preferential target
/// with probability p_triad, otherwise it is another preferential draw.
/// Yields m·(n−m) + m(m−1)/2 edges.
Graph gen_scale_free(Index n, Index m, double p_triad, std::uint64_t seed);

Graph generate(const GeneratorSpec& spec, std::uint64_t seed);

/// `count` graphs; graph i uses derive_seed(seed, i).
Dataset gen_dataset(const GeneratorSpec& spec, Index count, std::uint64_t seed);

}  // namespace idgnn::synth
