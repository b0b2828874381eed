#pragma once

#include "idgnn/graph.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace idgnn {

/// One line of a dataset file: a graph plus optional graph/node labels.
struct GraphRecord {
  Graph graph;
  std::optional<int> label;
  std::optional<std::vector<int>> node_labels;
};

using Dataset = std::vector<GraphRecord>;

/// {"num_nodes": n, "edges": [[u,v],...], "node_features": [[...],...]}
/// Edges are written in canonical order. "edge_features", when present, is
/// aligned with that edge list.
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

nlohmann::json record_to_json(const GraphRecord& r);
GraphRecord record_from_json(const nlohmann::json& j);

/// JSONL: one graph object per line, blank lines ignored. Parse failures
/// throw ParseError carrying the 1-based line number.
Dataset read_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);
std::string dataset_to_jsonl(const Dataset& data);

/// A single graph file: a JSON object, or a JSONL file whose first record is used.
Graph read_graph_file(const std::filesystem::path& path);

}  // namespace idgnn
