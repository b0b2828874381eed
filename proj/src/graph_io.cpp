#include "idgnn/graph_io.hpp"

#include "idgnn/errors.hpp"
#include "idgnn/io.hpp"

#include <fstream>
#include <sstream>

namespace idgnn {

using nlohmann::json;

namespace {

json matrix_to_json(const FeatureMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

FeatureMatrix matrix_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw InputError(std::string(field) + " must be an array of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows > 0 ? static_cast<Index>(j[0].size()) : 0;
  FeatureMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw InputError(std::string(field) + " rows must all have " + std::to_string(cols) + " entries");
    }
    for (Index c = 0; c < cols; ++c) m(i, c) = row[c].get<double>();
  }
  return m;
}

}  // namespace

json graph_to_json(const Graph& g) {
  json j;
  j["num_nodes"] = g.num_nodes();
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  if (g.node_features()) j["node_features"] = matrix_to_json(*g.node_features());
  if (g.edge_features()) j["edge_features"] = matrix_to_json(*g.edge_features());
  return j;
}

Graph graph_from_json(const json& j) {
  if (!j.is_object()) throw InputError("graph must be a JSON object");
  if (!j.contains("num_nodes")) throw InputError("graph is missing num_nodes");
  const auto n = j.at("num_nodes").get<Index>();
  std::vector<Edge> edges;
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw InputError("each edge must be a [u, v] pair");
      edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
    }
  }
  std::optional<FeatureMatrix> x;
  if (j.contains("node_features") && !j["node_features"].is_null()) {
    x = matrix_from_json(j["node_features"], "node_features");
  }
  Graph g = build_graph(n, edges, std::move(x));
  if (j.contains("edge_features") && !j["edge_features"].is_null()) {
    g = g.with_edge_features(matrix_from_json(j["edge_features"], "edge_features"));
  }
  return g;
}

json record_to_json(const GraphRecord& r) {
  json j = graph_to_json(r.graph);
  if (r.label) j["label"] = *r.label;
  if (r.node_labels) j["node_labels"] = *r.node_labels;
  return j;
}

GraphRecord record_from_json(const json& j) {
  GraphRecord r;
  r.graph = graph_from_json(j);
  if (j.contains("label") && !j["label"].is_null()) r.label = j["label"].get<int>();
  if (j.contains("node_labels") && !j["node_labels"].is_null()) {
    r.node_labels = j["node_labels"].get<std::vector<int>>();
    if (static_cast<Index>(r.node_labels->size()) != r.graph.num_nodes()) {
      throw InputError("node_labels length differs from num_nodes");
    }
  }
  return r;
}

Dataset read_dataset(std::istream& in) {
  Dataset out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset " + path.string());
  return read_dataset(in);
}

std::string dataset_to_jsonl(const Dataset& data) {
  std::string out;
  for (const auto& r : data) {
    out += record_to_json(r).dump();
    out += '\n';
  }
  return out;
}

Graph read_graph_file(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  try {
    return graph_from_json(json::parse(text));
  } catch (const json::exception&) {
    std::istringstream in(text);
    auto data = read_dataset(in);
    if (data.empty()) throw ParseError("no graph in " + path.string(), 0);
    return std::move(data.front().graph);
  }
}

}  // namespace idgnn
