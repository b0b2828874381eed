#pragma once

#include "idgnn/nn/adam.hpp"
#include "idgnn/nn/forward.hpp"
#include "idgnn/tasks.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace idgnn::task {

/// How a model turns embeddings into per-item predictions for a task:
///   node        node embedding (id_full: its own ego net's center)
///   sum_pool    sum of node embeddings
///   pair_concat [h_u | h_v] through the two-layer head
///   conditional h_{u|v} (u's ego net, identity at v) through a linear head
std::string wiring(const nn::ModelConfig& config, TaskKind kind);

/// Task level the head must be built for.
nn::TaskLevel task_level(TaskKind kind);

/// Precomputed forward inputs (message graphs, features, ego nets) for a
/// labeled task under one model configuration.
class PreparedTask {
 public:
  PreparedTask(const nn::ModelConfig& config, const LabeledTask& task);

  Index num_items() const { return static_cast<Index>(items_.size()); }
  Index num_graphs() const { return static_cast<Index>(graph_items_.size()); }
  const std::vector<Index>& items_of_graph(Index g) const { return graph_items_[g]; }
  int label(Index item) const { return items_[item].label; }

  /// Forward pass over the given items in order.
  nn::Tape forward(const nn::Model& model, const std::vector<Index>& items) const;

 private:
  struct PreparedItem {
    std::vector<Index> stacks;
    nn::Readout readout;  // refs index into `stacks`
    int label = 0;
  };
  std::vector<nn::StackInput> stacks_;
  std::vector<PreparedItem> items_;
  std::vector<std::vector<Index>> graph_items_;
};

struct TrainOptions {
  Index epochs = 200;
  double lr = 0.01;
  std::uint64_t seed = 0;
  /// Graphs per optimizer step; 0 means full batch.
  Index graphs_per_batch = 0;
  /// Include wall-clock seconds in the report (off keeps reports byte-stable).
  bool record_timing = false;
};

struct TrainReport {
  nlohmann::json config;
  nlohmann::json task;
  std::string wiring;
  TrainOptions options;
  Index num_parameters = 0;
  std::vector<double> epoch_losses;
  double final_train_accuracy = 0.0;
  double final_val_accuracy = 0.0;
  std::optional<double> wall_clock_seconds;

  nlohmann::json to_json() const;
  static TrainReport from_json(const nlohmann::json& j);
};

/// Adam training over batches of whole graphs in dataset order. Returns the report with accuracies measured after the final
/// epoch. A non-finite loss throws NumericError naming the epoch.
TrainReport train(nn::Model& model, const LabeledTask& train_split, const LabeledTask& val_split,
                  const TrainOptions& options);

/// Argmax accuracy (ties to the lowest class). Throws InputError on an
/// empty split.
double evaluate(const nn::Model& model, const LabeledTask& split);
double evaluate(const nn::Model& model, const PreparedTask& prepared);

/// Mean accuracy of a logits matrix against labels.
double accuracy(const nn::Matrix& logits, const std::vector<int>& labels);

}  // namespace idgnn::task
