#pragma once

#include "idgnn/graph.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace idgnn::nn {

enum class Flavor { gcn, sage, gin };
enum class Variant { plain, id_full, id_fast };
enum class Aggregation { sum, mean, max };
/// What the head consumes: one node embedding, a sum-pooled graph
/// embedding, or an edge (pair concat for plain/id_fast, a conditional
/// embedding for id_full).
enum class TaskLevel { node, edge, graph };

std::string to_string(Flavor);
std::string to_string(Variant);
std::string to_string(Aggregation);
std::string to_string(TaskLevel);
Flavor flavor_from_string(const std::string&);
Variant variant_from_string(const std::string&);  ///< accepts id_full / id-full etc.
Aggregation aggregation_from_string(const std::string&);
TaskLevel task_level_from_string(const std::string&);

/// Model hyperparameters.
///
/// Layer roles per flavor (all layers end in ReLU):
///  - sage: m = ReLU(x W + b), h' = [AGG(m) | h] U + c
///  - gcn:  m = x W + b, h' = Σ_{s ∈ N(u) ∪ {u}} m_s / sqrt((d_u+1)(d_s+1))
///  - gin:  m = x W + b, h' = ReLU((1+ε) m_u + AGG(m)) U + c, ε trainable (init 0)
/// Here x is the sender's embedding, concatenated with the edge features
/// when `edge_dim > 0`. `aggregation` applies to sage and gin; gcn always
/// uses its symmetric normalization.
struct ModelConfig {
  Flavor flavor = Flavor::sage;
  Variant variant = Variant::plain;
  TaskLevel task_level = TaskLevel::node;
  Index num_layers = 3;
  Index hidden_dim = 32;
  Index input_dim = 1;
  Index output_dim = 2;
  Aggregation aggregation = Aggregation::max;
  /// Closed-walk lengths appended to the input for id_fast.
  Index fast_k = 10;
  /// id_fast appends log(1 + count) instead of raw counts.
  bool fast_log_scale = true;
  Index edge_dim = 0;
  std::uint64_t seed = 0;

  void validate() const;
  /// Width of the layer-0 input (base features plus id_fast columns).
  Index layer0_input_dim() const;
  bool heterogeneous() const { return variant == Variant::id_full; }
  bool pair_head() const { return task_level == TaskLevel::edge && variant != Variant::id_full; }
};

nlohmann::json to_json(const ModelConfig&);
ModelConfig config_from_json(const nlohmann::json&);

}  // namespace idgnn::nn
