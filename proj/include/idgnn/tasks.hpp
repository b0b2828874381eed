#pragma once

#include "idgnn/graph_io.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace idgnn::task {

enum class TaskKind { node_cc, edge_spd, graph_cc };

std::string to_string(TaskKind);
/// Accepts node_cc / node-cc, edge_spd / edge-spd, graph_cc / graph-cc.
TaskKind task_kind_from_string(const std::string&);

struct TaskSpec {
  TaskKind kind = TaskKind::node_cc;
  int num_classes = 10;
  /// Strictly increasing; class i covers [edges[i], edges[i+1]) and the
  /// last class also takes everything at or above its lower edge.
  std::vector<double> bin_edges;
  Index pairs_per_graph = 0;   ///< edge_spd only
  Index distance_cap = 5;      ///< edge_spd: distances >= cap share the top class

  void validate() const;
  nlohmann::json to_json() const;
};

TaskSpec node_cc_spec();
TaskSpec graph_cc_spec();
TaskSpec spd_spec(Index pairs_per_graph);

/// One supervised example. `u` is the node (node tasks) or the first pair
/// endpoint; `v` is the second endpoint. Unused ids are −1.
struct Item {
  Index graph = 0;
  NodeId u = -1;
  NodeId v = -1;
  int label = 0;
};

struct LabeledTask {
  TaskSpec spec;
  Dataset graphs;
  std::vector<Item> items;
  std::vector<std::string> warnings;
};

/// Node label = clustering-coefficient bin over 10 uniform bins on [0, 1]
/// (c = 1 goes to bin 9). Computed from exact rationals.
LabeledTask make_node_cc_task(const Dataset& data);

/// Ordered pairs (u, v), u != v, labeled min(spd, 5) − 1; unreachable pairs
/// fall in the top class. Sampling cycles through the five classes and
/// draws uniformly without replacement inside each, so classes stay
/// balanced; a class a graph cannot realize is skipped with a warning.
LabeledTask make_spd_task(const Dataset& data, Index pairs_per_graph, std::uint64_t seed);

/// Graph label = bin of the mean node clustering coefficient over 10
/// uniform bins on [0, 0.5], values above clamped into bin 9.
LabeledTask make_graph_cc_task(const Dataset& data);

/// Graph-level shuffled split: round(fraction · graphs) graphs go to the
/// first side. Items follow their graph. Throws InputError if fraction is
/// outside (0, 1) or either side would be empty.
std::pair<LabeledTask, LabeledTask> split(const LabeledTask& task, double fraction, std::uint64_t seed);

/// Label histogram (num_classes entries).
std::vector<Index> class_histogram(const LabeledTask& task);

}  // namespace idgnn::task
