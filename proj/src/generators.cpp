#include "idgnn/generators.hpp"

#include "idgnn/errors.hpp"
#include "idgnn/random.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace idgnn::synth {

std::string to_string(Family f) {
  switch (f) {
    case Family::d_regular: return "d_regular";
    case Family::small_world: return "small_world";
    case Family::scale_free: return "scale_free";
  }
  return "unknown";
}

Family family_from_string(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), '-', '_');
  if (t == "d_regular") return Family::d_regular;
  if (t == "small_world") return Family::small_world;
  if (t == "scale_free") return Family::scale_free;
  throw InputError("unknown graph family '" + s + "'");
}

namespace {

void check_regular(Index n, Index d) {
  if (n <= 0 || d < 0) throw InputError("d-regular needs n > 0 and d >= 0");
  if (d >= n) throw InputError("d-regular needs d < n (got d=" + std::to_string(d) + ", n=" + std::to_string(n) + ")");
  if ((n * d) % 2 != 0) {
    throw InputError("d-regular needs n*d even (n*d = " + std::to_string(n * d) + " is odd)");
  }
}

void check_small_world(Index n, Index k, double p) {
  if (k < 0 || k % 2 != 0) throw InputError("small-world needs an even k (got " + std::to_string(k) + ")");
  if (k >= n) throw InputError("small-world needs k < n");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("rewiring probability must lie in [0, 1]");
}

void check_scale_free(Index n, Index m, double p) {
  if (m < 1 || m >= n) throw InputError("scale-free needs 1 <= m < n (got m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("triad probability must lie in [0, 1]");
}

}  // namespace

void GeneratorSpec::validate() const {
  const Index n_hi = std::max(num_nodes, num_nodes_max);
  switch (family) {
    case Family::d_regular:
      check_regular(num_nodes, degree_param);
      if (n_hi != num_nodes) check_regular(n_hi, degree_param);
      break;
    case Family::small_world: check_small_world(num_nodes, degree_param, prob); break;
    case Family::scale_free: check_scale_free(num_nodes, degree_param, prob); break;
  }
}

Graph gen_d_regular(Index n, Index d, std::uint64_t seed, std::uint64_t* restarts) {
  check_regular(n, d);
  Rng rng(seed);
  std::vector<NodeId> stubs;
  stubs.reserve(static_cast<std::size_t>(n * d));
  std::uint64_t failed = 0;
  std::vector<Edge> edges;
  std::set<Edge> seen;
  for (;;) {
    stubs.clear();
    for (NodeId v = 0; v < n; ++v) stubs.insert(stubs.end(), static_cast<std::size_t>(d), v);
    edges.clear();
    seen.clear();
    bool ok = true;
    // Uniform random perfect matching drawn pair by pair; any collision
    // rejects the whole matching.
    const std::size_t total = stubs.size();
    for (std::size_t i = 0; i + 1 < total; i += 2) {
      std::swap(stubs[i], stubs[i + rng.uniform_below(total - i)]);
      std::swap(stubs[i + 1], stubs[i + 1 + rng.uniform_below(total - i - 1)]);
      const NodeId a = stubs[i];
      const NodeId b = stubs[i + 1];
      const Edge e{std::min(a, b), std::max(a, b)};
      if (a == b || !seen.insert(e).second) {
        ok = false;
        break;
      }
      edges.push_back(e);
    }
    if (ok) break;
    ++failed;
  }
  if (restarts) *restarts = failed;
  return build_graph(n, edges);
}

Graph gen_small_world(Index n, Index k, double p, std::uint64_t seed) {
  check_small_world(n, k, p);
  Rng rng(seed);
  std::vector<std::set<NodeId>> adj(static_cast<std::size_t>(n));
  for (NodeId u = 0; u < n; ++u) {
    for (Index j = 1; j <= k / 2; ++j) {
      const NodeId v = (u + j) % n;
      adj[u].insert(v);
      adj[v].insert(u);
    }
  }
  for (Index j = 1; j <= k / 2; ++j) {
    for (NodeId u = 0; u < n; ++u) {
      if (!rng.bernoulli(p)) continue;
      const NodeId v = (u + j) % n;
      if (!adj[u].count(v)) continue;  // already rewired away
      if (static_cast<Index>(adj[u].size()) >= n - 1) continue;
      NodeId w;
      do {
        w = static_cast<NodeId>(rng.uniform_below(static_cast<std::uint64_t>(n)));
      } while (w == u || adj[u].count(w));
      adj[u].erase(v);
      adj[v].erase(u);
      adj[u].insert(w);
      adj[w].insert(u);
    }
  }
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId w : adj[u]) {
      if (u < w) edges.emplace_back(u, w);
    }
  }
  return build_graph(n, edges);
}

Graph gen_scale_free(Index n, Index m, double p_triad, std::uint64_t seed) {
  check_scale_free(n, m, p_triad);
  Rng rng(seed);
  std::vector<Edge> edges;
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(n));
  // Each node appears once per incident edge; seed nodes of degree zero
  // (m == 1) appear once so the first draw has a target.
  std::vector<NodeId> repeated;
  const auto link = [&](NodeId a, NodeId b) {
    edges.emplace_back(std::min(a, b), std::max(a, b));
    adj[a].push_back(b);
    adj[b].push_back(a);
    repeated.push_back(a);
    repeated.push_back(b);
  };
  for (NodeId a = 0; a < m; ++a) {
    for (NodeId b = a + 1; b < m; ++b) link(a, b);
  }
  if (m == 1) repeated.push_back(0);

  for (NodeId v = m; v < n; ++v) {
    std::vector<NodeId> targets;
    const auto chosen = [&](NodeId t) { return std::find(targets.begin(), targets.end(), t) != targets.end(); };
    const auto preferential = [&]() {
      NodeId t;
      do {
        t = repeated[rng.uniform_below(repeated.size())];
      } while (chosen(t));
      return t;
    };
    NodeId last_pa = preferential();
    targets.push_back(last_pa);
    while (static_cast<Index>(targets.size()) < m) {
      bool added = false;
      if (rng.bernoulli(p_triad)) {
        std::vector<NodeId> open;
        for (NodeId w : adj[last_pa]) {
          if (!chosen(w)) open.push_back(w);
        }
        if (!open.empty()) {
          targets.push_back(open[rng.uniform_below(open.size())]);
          added = true;
        }
      }
      if (!added) {
        last_pa = preferential();
        targets.push_back(last_pa);
      }
    }
    for (NodeId t : targets) link(v, t);
  }
  return build_graph(n, edges);
}

Graph generate(const GeneratorSpec& spec, std::uint64_t seed) {
  Index n = spec.num_nodes;
  if (spec.num_nodes_max > spec.num_nodes) {
    // The size draw uses its own stream so the topology stream is unchanged.
    Rng size_rng(derive_seed(seed, 0x5153));
    n += static_cast<Index>(size_rng.uniform_below(static_cast<std::uint64_t>(spec.num_nodes_max - spec.num_nodes + 1)));
    if (spec.family == Family::d_regular && (n * spec.degree_param) % 2 != 0) ++n;
    if (n > spec.num_nodes_max) n -= 2;
  }
  switch (spec.family) {
    case Family::d_regular: return gen_d_regular(n, spec.degree_param, seed);
    case Family::small_world: return gen_small_world(n, spec.degree_param, spec.prob, seed);
    case Family::scale_free: return gen_scale_free(n, spec.degree_param, spec.prob, seed);
  }
  throw InputError("unknown family");
}

Dataset gen_dataset(const GeneratorSpec& spec, Index count, std::uint64_t seed) {
  spec.validate();
  if (count < 0) throw InputError("count must be nonnegative");
  Dataset out;
  out.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    out.push_back(GraphRecord{generate(spec, derive_seed(seed, static_cast<std::uint64_t>(i))), {}, {}});
  }
  return out;
}

}  // namespace idgnn::synth
