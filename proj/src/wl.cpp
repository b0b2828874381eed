#include "idgnn/wl.hpp"

#include "idgnn/errors.hpp"
#include "idgnn/io.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace idgnn::wl {

namespace {

using Colors = std::vector<std::int64_t>;
using Signature = std::vector<std::int64_t>;

Signature signature_of(const Graph& g, const Colors& colors, NodeId v) {
  Signature s;
  const auto nb = g.neighbors(v);
  s.reserve(nb.size() + 1);
  s.push_back(colors[v]);
  for (NodeId w : nb) s.push_back(colors[w]);
  std::sort(s.begin() + 1, s.end());
  return s;
}

/// Renumbers arbitrary values to 0..k-1 in sorted order.
Colors canonicalize(std::span<const std::int64_t> values) {
  std::vector<std::int64_t> distinct(values.begin(), values.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  Colors out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::lower_bound(distinct.begin(), distinct.end(), values[i]) - distinct.begin();
  }
  return out;
}

std::uint64_t mix_signature(std::uint64_t h, const Signature& s, Index count) {
  h = io::fnv1a64(std::string_view(reinterpret_cast<const char*>(s.data()), s.size() * sizeof(std::int64_t)), h);
  h = io::fnv1a64(std::string_view(reinterpret_cast<const char*>(&count), sizeof count), h);
  const std::uint64_t sep = s.size();
  return io::fnv1a64(std::string_view(reinterpret_cast<const char*>(&sep), sizeof sep), h);
}

/// One refinement round shared by any number of graphs, so that color ids
/// are comparable across them. Returns the new class count. `histograms`
/// receives, per graph, the sorted (signature id, count) list.
Index refine_round(std::span<const Graph* const> graphs, std::vector<Colors>& colors,
                   std::vector<std::vector<std::pair<std::int64_t, Index>>>* histograms,
                   std::vector<std::uint64_t>* digests) {
  std::vector<std::vector<Signature>> sigs(graphs.size());
  std::vector<Signature> distinct;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = *graphs[gi];
    sigs[gi].reserve(static_cast<std::size_t>(g.num_nodes()));
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      sigs[gi].push_back(signature_of(g, colors[gi], v));
      distinct.push_back(sigs[gi].back());
    }
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    std::vector<Index> counts(distinct.size(), 0);
    for (std::size_t v = 0; v < sigs[gi].size(); ++v) {
      const auto id = std::lower_bound(distinct.begin(), distinct.end(), sigs[gi][v]) - distinct.begin();
      colors[gi][v] = id;
      ++counts[id];
    }
    if (histograms) {
      auto& h = (*histograms)[gi];
      h.clear();
      for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0) h.emplace_back(static_cast<std::int64_t>(c), counts[c]);
      }
    }
    if (digests) {
      for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0) (*digests)[gi] = mix_signature((*digests)[gi], distinct[c], counts[c]);
      }
    }
  }
  return static_cast<Index>(distinct.size());
}

Index count_classes(const Colors& c) {
  std::vector<std::int64_t> d(c.begin(), c.end());
  std::sort(d.begin(), d.end());
  return static_cast<Index>(std::unique(d.begin(), d.end()) - d.begin());
}

}  // namespace

WlColoring wl_refine(const Graph& g, std::optional<std::span<const std::int64_t>> init_colors) {
  const Index n = g.num_nodes();
  Colors start(static_cast<std::size_t>(n), 0);
  if (init_colors) {
    if (static_cast<Index>(init_colors->size()) != n) throw InputError("init_colors length differs from num_nodes");
    start = canonicalize(*init_colors);
  }
  std::vector<Colors> colors{std::move(start)};
  const Graph* graphs[] = {&g};
  std::vector<std::uint64_t> digest{io::fnv1a64(std::to_string(n))};
  for (std::int64_t c : colors[0]) {
    digest[0] = io::fnv1a64(std::string_view(reinterpret_cast<const char*>(&c), sizeof c), digest[0]);
  }

  WlColoring out;
  Index classes = count_classes(colors[0]);
  std::vector<std::vector<std::pair<std::int64_t, Index>>> hist(1);
  for (Index round = 0; round < std::max<Index>(n, 1); ++round) {
    const Index next = refine_round(graphs, colors, &hist, &digest);
    if (next == classes) break;
    classes = next;
    ++out.num_rounds;
  }
  if (n == 0) hist[0].clear();
  out.colors = std::move(colors[0]);
  out.histogram = std::move(hist[0]);
  out.trace_digest = digest[0];
  return out;
}

std::uint64_t wl_graph_hash(const Graph& g) { return wl_refine(g).trace_digest; }

namespace {

/// Jointly refines two colorings. Returns false as soon as the per-round
/// histograms differ, which proves the colored graphs non-isomorphic.
bool joint_refine(const Graph& a, const Graph& b, Colors& ca, Colors& cb) {
  {
    std::vector<std::int64_t> all(ca.begin(), ca.end());
    all.insert(all.end(), cb.begin(), cb.end());
    const Colors canon = canonicalize(all);
    std::copy(canon.begin(), canon.begin() + static_cast<std::ptrdiff_t>(ca.size()), ca.begin());
    std::copy(canon.begin() + static_cast<std::ptrdiff_t>(ca.size()), canon.end(), cb.begin());
  }
  std::vector<Colors> colors{std::move(ca), std::move(cb)};
  const Graph* graphs[] = {&a, &b};
  std::vector<std::vector<std::pair<std::int64_t, Index>>> hist(2);
  Index classes = count_classes(colors[0]);
  bool equal = true;
  for (Index round = 0; round <= a.num_nodes(); ++round) {
    const Index next = refine_round(graphs, colors, &hist, nullptr);
    if (hist[0] != hist[1]) {
      equal = false;
      break;
    }
    if (next == classes) break;
    classes = next;
  }
  ca = std::move(colors[0]);
  cb = std::move(colors[1]);
  return equal;
}

bool search(const Graph& a, const Graph& b, Colors ca, Colors cb, std::vector<NodeId>& mapping) {
  if (!joint_refine(a, b, ca, cb)) return false;
  const Index n = a.num_nodes();

  std::map<std::int64_t, Index> class_size;
  for (auto c : ca) ++class_size[c];
  std::int64_t target = -1;
  Index best = n + 1;
  for (const auto& [c, size] : class_size) {
    if (size > 1 && size < best) {
      best = size;
      target = c;
    }
  }

  if (target < 0) {
    std::vector<NodeId> by_color(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) by_color[cb[v]] = v;
    mapping.assign(static_cast<std::size_t>(n), 0);
    for (NodeId v = 0; v < n; ++v) mapping[v] = by_color[ca[v]];
    for (const auto& [u, v] : a.edges()) {
      if (!b.has_edge(mapping[u], mapping[v])) return false;
    }
    return true;
  }

  NodeId x = 0;
  while (ca[x] != target) ++x;
  const std::int64_t fresh = 2 * n + 1;
  for (NodeId y = 0; y < n; ++y) {
    if (cb[y] != target) continue;
    Colors na = ca;
    Colors nb = cb;
    na[x] = fresh;
    nb[y] = fresh;
    if (search(a, b, std::move(na), std::move(nb), mapping)) return true;
  }
  return false;
}

}  // namespace

std::optional<std::vector<NodeId>> find_isomorphism(const Graph& a, const Graph& b) {
  const Index limit = std::max(a.num_nodes(), b.num_nodes());
  if (limit > kMaxIsomorphismNodes) {
    throw CapabilityError("isomorphism check limited to " + std::to_string(kMaxIsomorphismNodes) + " nodes (got " +
                          std::to_string(limit) + ")");
  }
  if (a.num_nodes() != b.num_nodes() || a.num_edges() != b.num_edges()) return std::nullopt;
  auto da = a.degrees();
  auto db = b.degrees();
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  if (da != db) return std::nullopt;

  const auto n = static_cast<std::size_t>(a.num_nodes());
  std::vector<NodeId> mapping;
  if (!search(a, b, Colors(n, 0), Colors(n, 0), mapping)) return std::nullopt;
  return mapping;
}

bool are_isomorphic(const Graph& a, const Graph& b) { return find_isomorphism(a, b).has_value(); }

}  // namespace idgnn::wl
