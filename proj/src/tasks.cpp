#include "idgnn/tasks.hpp"

#include "idgnn/errors.hpp"
#include "idgnn/random.hpp"
#include "idgnn/walk_counts.hpp"

#include <algorithm>
#include <cmath>

namespace idgnn::task {

std::string to_string(TaskKind k) {
  switch (k) {
    case TaskKind::node_cc: return "node_cc";
    case TaskKind::edge_spd: return "edge_spd";
    case TaskKind::graph_cc: return "graph_cc";
  }
  return "?";
}

TaskKind task_kind_from_string(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), '-', '_');
  if (t == "node_cc") return TaskKind::node_cc;
  if (t == "edge_spd") return TaskKind::edge_spd;
  if (t == "graph_cc") return TaskKind::graph_cc;
  throw InputError("unknown task '" + s + "'");
}

void TaskSpec::validate() const {
  if (num_classes < 2) throw InputError("a task needs at least two classes");
  if (static_cast<int>(bin_edges.size()) != num_classes + 1) throw InputError("bin edge count must be num_classes + 1");
  for (std::size_t i = 1; i < bin_edges.size(); ++i) {
    if (!(bin_edges[i] > bin_edges[i - 1])) throw InputError("bin edges must be strictly increasing");
  }
}

nlohmann::json TaskSpec::to_json() const {
  nlohmann::json j = {{"kind", to_string(kind)}, {"num_classes", num_classes}, {"bin_edges", bin_edges}};
  if (kind == TaskKind::edge_spd) {
    j["pairs_per_graph"] = pairs_per_graph;
    j["distance_cap"] = distance_cap;
  }
  return j;
}

namespace {

std::vector<double> uniform_edges(double hi, int bins) {
  std::vector<double> e;
  for (int i = 0; i <= bins; ++i) e.push_back(hi * i / bins);
  return e;
}

}  // namespace

TaskSpec node_cc_spec() { return {TaskKind::node_cc, 10, uniform_edges(1.0, 10), 0, 5}; }
TaskSpec graph_cc_spec() { return {TaskKind::graph_cc, 10, uniform_edges(0.5, 10), 0, 5}; }

TaskSpec spd_spec(Index pairs_per_graph) {
  // Distances 1, 2, 3, 4 and >= 5.
  return {TaskKind::edge_spd, 5, {1, 2, 3, 4, 5, 6}, pairs_per_graph, 5};
}

LabeledTask make_node_cc_task(const Dataset& data) {
  LabeledTask t{node_cc_spec(), data, {}, {}};
  for (Index gi = 0; gi < static_cast<Index>(t.graphs.size()); ++gi) {
    auto& rec = t.graphs[gi];
    std::vector<int> labels;
    for (NodeId v = 0; v < rec.graph.num_nodes(); ++v) {
      const auto c = analytic::clustering_ratio_direct(rec.graph, v);
      const int bin = static_cast<int>(std::min<std::int64_t>(9, (10 * c.num) / c.den));
      labels.push_back(bin);
      t.items.push_back({gi, v, -1, bin});
    }
    rec.node_labels = std::move(labels);
  }
  return t;
}

LabeledTask make_spd_task(const Dataset& data, Index pairs_per_graph, std::uint64_t seed) {
  if (pairs_per_graph < 1) throw InputError("pairs_per_graph must be >= 1");
  LabeledTask t{spd_spec(pairs_per_graph), data, {}, {}};
  const int classes = t.spec.num_classes;
  for (Index gi = 0; gi < static_cast<Index>(t.graphs.size()); ++gi) {
    const Graph& g = t.graphs[gi].graph;
    std::vector<std::vector<std::pair<NodeId, NodeId>>> pools(static_cast<std::size_t>(classes));
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      const auto dist = bfs_distances(g, u, g.num_nodes());
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (u == v) continue;
        const Index d = dist[v].value_or(t.spec.distance_cap);
        pools[static_cast<std::size_t>(std::min(d, t.spec.distance_cap) - 1)].emplace_back(u, v);
      }
    }
    for (int c = 0; c < classes; ++c) {
      if (pools[c].empty()) {
        t.warnings.push_back("graph " + std::to_string(gi) + ": no pairs for class " + std::to_string(c));
      }
    }
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(gi)));
    Index taken = 0;
    for (int c = 0; taken < pairs_per_graph; c = (c + 1) % classes) {
      if (std::all_of(pools.begin(), pools.end(), [](const auto& p) { return p.empty(); })) break;
      auto& pool = pools[c];
      if (pool.empty()) continue;
      const auto pick = rng.uniform_below(pool.size());
      std::swap(pool[pick], pool.back());
      t.items.push_back({gi, pool.back().first, pool.back().second, c});
      pool.pop_back();
      ++taken;
    }
  }
  return t;
}

LabeledTask make_graph_cc_task(const Dataset& data) {
  LabeledTask t{graph_cc_spec(), data, {}, {}};
  for (Index gi = 0; gi < static_cast<Index>(t.graphs.size()); ++gi) {
    auto& rec = t.graphs[gi];
    const Index n = rec.graph.num_nodes();
    double mean = 0.0;
    for (NodeId v = 0; v < n; ++v) mean += analytic::clustering_direct(rec.graph, v);
    if (n > 0) mean /= static_cast<double>(n);
    // Bin width 0.05; the small offset keeps exact edges like 0.5 from
    // rounding down.
    const int bin = static_cast<int>(std::clamp(std::floor(mean * 20.0 + 1e-9), 0.0, 9.0));
    rec.label = bin;
    t.items.push_back({gi, -1, -1, bin});
  }
  return t;
}

std::pair<LabeledTask, LabeledTask> split(const LabeledTask& task, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw InputError("split fraction must lie strictly between 0 and 1");
  const Index total = static_cast<Index>(task.graphs.size());
  const Index first = static_cast<Index>(std::llround(fraction * static_cast<double>(total)));
  if (first <= 0 || first >= total) throw InputError("split leaves one side without graphs");
  std::vector<Index> order(static_cast<std::size_t>(total));
  for (Index i = 0; i < total; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());

  std::vector<Index> side(static_cast<std::size_t>(total));
  std::vector<Index> new_index(static_cast<std::size_t>(total));
  LabeledTask a{task.spec, {}, {}, {}};
  LabeledTask b{task.spec, {}, {}, {}};
  for (Index pos = 0; pos < total; ++pos) {
    const Index gi = order[pos];
    auto& dst = pos < first ? a : b;
    side[gi] = pos < first ? 0 : 1;
    new_index[gi] = static_cast<Index>(dst.graphs.size());
    dst.graphs.push_back(task.graphs[gi]);
  }
  for (const Item& it : task.items) {
    Item moved = it;
    moved.graph = new_index[it.graph];
    (side[it.graph] == 0 ? a : b).items.push_back(moved);
  }
  return {std::move(a), std::move(b)};
}

std::vector<Index> class_histogram(const LabeledTask& task) {
  std::vector<Index> h(static_cast<std::size_t>(task.spec.num_classes), 0);
  for (const Item& it : task.items) ++h.at(static_cast<std::size_t>(it.label));
  return h;
}

}  // namespace idgnn::task
