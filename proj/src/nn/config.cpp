#include "idgnn/nn/config.hpp"

#include "idgnn/errors.hpp"

#include <algorithm>

namespace idgnn::nn {

namespace {

std::string normalized(std::string s) {
  std::replace(s.begin(), s.end(), '-', '_');
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::gcn: return "gcn";
    case Flavor::sage: return "sage";
    case Flavor::gin: return "gin";
  }
  return "?";
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::plain: return "plain";
    case Variant::id_full: return "id_full";
    case Variant::id_fast: return "id_fast";
  }
  return "?";
}

std::string to_string(Aggregation a) {
  switch (a) {
    case Aggregation::sum: return "sum";
    case Aggregation::mean: return "mean";
    case Aggregation::max: return "max";
  }
  return "?";
}

std::string to_string(TaskLevel t) {
  switch (t) {
    case TaskLevel::node: return "node";
    case TaskLevel::edge: return "edge";
    case TaskLevel::graph: return "graph";
  }
  return "?";
}

Flavor flavor_from_string(const std::string& s) {
  const auto t = normalized(s);
  if (t == "gcn") return Flavor::gcn;
  if (t == "sage") return Flavor::sage;
  if (t == "gin") return Flavor::gin;
  throw InputError("unknown flavor '" + s + "'");
}

Variant variant_from_string(const std::string& s) {
  const auto t = normalized(s);
  if (t == "plain") return Variant::plain;
  if (t == "id_full") return Variant::id_full;
  if (t == "id_fast") return Variant::id_fast;
  throw InputError("unknown variant '" + s + "'");
}

Aggregation aggregation_from_string(const std::string& s) {
  const auto t = normalized(s);
  if (t == "sum") return Aggregation::sum;
  if (t == "mean") return Aggregation::mean;
  if (t == "max") return Aggregation::max;
  throw InputError("unknown aggregation '" + s + "'");
}

TaskLevel task_level_from_string(const std::string& s) {
  const auto t = normalized(s);
  if (t == "node") return TaskLevel::node;
  if (t == "edge") return TaskLevel::edge;
  if (t == "graph") return TaskLevel::graph;
  throw InputError("unknown task level '" + s + "'");
}

void ModelConfig::validate() const {
  if (num_layers < 1) throw InputError("num_layers must be >= 1");
  if (hidden_dim < 1) throw InputError("hidden_dim must be >= 1");
  if (input_dim < 1) throw InputError("input_dim must be >= 1");
  if (output_dim < 1) throw InputError("output_dim must be >= 1");
  if (edge_dim < 0) throw InputError("edge_dim must be >= 0");
  if (variant == Variant::id_fast && fast_k < 1) throw InputError("id_fast requires fast_k >= 1");
}

Index ModelConfig::layer0_input_dim() const { return input_dim + (variant == Variant::id_fast ? fast_k : 0); }

nlohmann::json to_json(const ModelConfig& c) {
  return {
      {"flavor", to_string(c.flavor)},
      {"variant", to_string(c.variant)},
      {"task_level", to_string(c.task_level)},
      {"num_layers", c.num_layers},
      {"hidden_dim", c.hidden_dim},
      {"input_dim", c.input_dim},
      {"output_dim", c.output_dim},
      {"aggregation", to_string(c.aggregation)},
      {"fast_k", c.fast_k},
      {"fast_log_scale", c.fast_log_scale},
      {"edge_dim", c.edge_dim},
      {"seed", c.seed},
  };
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.flavor = flavor_from_string(j.at("flavor").get<std::string>());
  c.variant = variant_from_string(j.at("variant").get<std::string>());
  c.task_level = task_level_from_string(j.at("task_level").get<std::string>());
  c.num_layers = j.at("num_layers").get<Index>();
  c.hidden_dim = j.at("hidden_dim").get<Index>();
  c.input_dim = j.at("input_dim").get<Index>();
  c.output_dim = j.at("output_dim").get<Index>();
  c.aggregation = aggregation_from_string(j.at("aggregation").get<std::string>());
  c.fast_k = j.value("fast_k", Index{10});
  c.fast_log_scale = j.value("fast_log_scale", true);
  c.edge_dim = j.value("edge_dim", Index{0});
  c.seed = j.value("seed", std::uint64_t{0});
  c.validate();
  return c;
}

}  // namespace idgnn::nn
