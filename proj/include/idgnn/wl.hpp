#pragma once

#include "idgnn/graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace idgnn::wl {

/// Stable 1-WL partition.
///
/// Colors are canonical: at every round the distinct signatures
/// (own color, sorted neighbor colors) are sorted and numbered 0, 1, ... in
/// that order, so the numbering does not depend on node order.
struct WlColoring {
  std::vector<std::int64_t> colors;
  /// Refinement rounds executed until the partition stopped changing.
  Index num_rounds = 0;
  /// Sorted (color, count) pairs of the stable coloring.
  std::vector<std::pair<std::int64_t, Index>> histogram;
  /// Digest of every round's sorted (signature, count) list. Two graphs with
  /// equal digests are 1-WL indistinguishable.
  std::uint64_t trace_digest = 0;

  Index num_classes() const { return static_cast<Index>(histogram.size()); }
};

/// Refines until stable (at most num_nodes rounds). `init_colors` defaults
/// to all-equal; arbitrary integer values are canonicalized first.
WlColoring wl_refine(const Graph& g, std::optional<std::span<const std::int64_t>> init_colors = std::nullopt);

/// Isomorphism-invariant 64-bit digest of the WL refinement sequence.
std::uint64_t wl_graph_hash(const Graph& g);

/// Graphs above this size are rejected by are_isomorphic.
inline constexpr Index kMaxIsomorphismNodes = 128;

/// Exact isomorphism test by individualization and refinement: joint WL
/// color classes give the candidate sets, and the search branches on the
/// smallest non-singleton class until the coloring is discrete.
/// Throws CapabilityError above kMaxIsomorphismNodes.
bool are_isomorphic(const Graph& a, const Graph& b);

/// Node mapping a -> b witnessing isomorphism, if one exists.
std::optional<std::vector<NodeId>> find_isomorphism(const Graph& a, const Graph& b);

}  // namespace idgnn::wl
