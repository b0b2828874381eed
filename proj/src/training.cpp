#include "idgnn/training.hpp"

#include "idgnn/errors.hpp"
#include "idgnn/nn/loss.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <unordered_map>

namespace idgnn::task {

nn::TaskLevel task_level(TaskKind kind) {
  switch (kind) {
    case TaskKind::node_cc: return nn::TaskLevel::node;
    case TaskKind::edge_spd: return nn::TaskLevel::edge;
    case TaskKind::graph_cc: return nn::TaskLevel::graph;
  }
  return nn::TaskLevel::node;
}

std::string wiring(const nn::ModelConfig& config, TaskKind kind) {
  switch (kind) {
    case TaskKind::node_cc: return "node";
    case TaskKind::graph_cc: return "sum_pool";
    case TaskKind::edge_spd: return config.variant == nn::Variant::id_full ? "conditional" : "pair_concat";
  }
  return "?";
}

PreparedTask::PreparedTask(const nn::ModelConfig& config, const LabeledTask& task) {
  config.validate();
  if (config.output_dim != task.spec.num_classes) {
    throw InputError("model output_dim " + std::to_string(config.output_dim) + " differs from the task's " +
                     std::to_string(task.spec.num_classes) + " classes");
  }
  if (config.task_level != task_level(task.spec.kind)) {
    throw InputError("model head is built for " + nn::to_string(config.task_level) + " tasks, task is " +
                     to_string(task.spec.kind));
  }
  const bool id_full = config.variant == nn::Variant::id_full;
  const Index k = config.num_layers;
  graph_items_.resize(task.graphs.size());
  for (Index i = 0; i < static_cast<Index>(task.items.size()); ++i) graph_items_.at(task.items[i].graph).push_back(i);
  items_.resize(task.items.size());

  const auto add_stack = [this](std::shared_ptr<const nn::MessageGraph> g, nn::Matrix x) {
    stacks_.push_back({std::move(g), std::move(x)});
    return static_cast<Index>(stacks_.size()) - 1;
  };
  const auto ego_stack = [&](const Graph& g, const nn::Matrix& x, NodeId center, std::optional<NodeId> identity_at) {
    const EgoNet ego = extract_ego(g, center, k, identity_at);
    nn::Matrix local(ego.subgraph.num_nodes(), x.cols());
    for (Index i = 0; i < local.rows(); ++i) local.row(i) = x.row(ego.to_parent[i]);
    const Index id = add_stack(std::make_shared<const nn::MessageGraph>(nn::make_message_graph(ego)), std::move(local));
    return std::pair{id, ego.center_local_index};
  };

  for (Index gi = 0; gi < static_cast<Index>(task.graphs.size()); ++gi) {
    const Graph& g = task.graphs[gi].graph;
    const nn::Matrix x = nn::input_features(config, g);
    Index whole = -1;
    std::vector<std::pair<Index, Index>> node_egos;  // graph tasks under id_full
    if (!id_full) {
      whole = add_stack(std::make_shared<const nn::MessageGraph>(nn::make_message_graph(g)), x);
    } else if (task.spec.kind == TaskKind::graph_cc) {
      for (NodeId w = 0; w < g.num_nodes(); ++w) node_egos.push_back(ego_stack(g, x, w, std::nullopt));
    }
    for (Index idx : graph_items_[gi]) {
      const Item& it = task.items[idx];
      PreparedItem& p = items_[idx];
      p.label = it.label;
      switch (task.spec.kind) {
        case TaskKind::node_cc:
          if (id_full) {
            const auto [s, center] = ego_stack(g, x, it.u, std::nullopt);
            p.stacks = {s};
            p.readout.segments = {{{0, center}}};
          } else {
            p.stacks = {whole};
            p.readout.segments = {{{0, it.u}}};
          }
          break;
        case TaskKind::edge_spd:
          if (id_full) {
            const auto [s, center] = ego_stack(g, x, it.u, it.v);
            p.stacks = {s};
            p.readout.segments = {{{0, center}}};
          } else {
            p.stacks = {whole};
            p.readout.segments = {{{0, it.u}}, {{0, it.v}}};
          }
          break;
        case TaskKind::graph_cc: {
          std::vector<nn::NodeRef> refs;
          if (id_full) {
            for (Index i = 0; i < static_cast<Index>(node_egos.size()); ++i) {
              p.stacks.push_back(node_egos[i].first);
              refs.push_back({i, node_egos[i].second});
            }
          } else {
            p.stacks = {whole};
            for (NodeId w = 0; w < g.num_nodes(); ++w) refs.push_back({0, w});
          }
          p.readout.segments = {std::move(refs)};
          break;
        }
      }
    }
  }
}

nn::Tape PreparedTask::forward(const nn::Model& model, const std::vector<Index>& items) const {
  std::vector<nn::StackInput> inputs;
  std::unordered_map<Index, Index> local;
  std::vector<nn::Readout> readouts;
  readouts.reserve(items.size());
  for (Index idx : items) {
    const PreparedItem& p = items_.at(idx);
    nn::Readout r = p.readout;
    for (auto& seg : r.segments) {
      for (auto& ref : seg) {
        const Index global = p.stacks[ref.stack];
        auto [it, inserted] = local.try_emplace(global, static_cast<Index>(inputs.size()));
        if (inserted) inputs.push_back(stacks_[global]);
        ref.stack = it->second;
      }
    }
    readouts.push_back(std::move(r));
  }
  return nn::forward(model, inputs, std::move(readouts));
}

double accuracy(const nn::Matrix& logits, const std::vector<int>& labels) {
  if (labels.empty()) throw InputError("accuracy of an empty split");
  const auto pred = nn::predict(logits);
  Index hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += pred[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double evaluate(const nn::Model& model, const PreparedTask& prepared) {
  if (prepared.num_items() == 0) throw InputError("evaluate: empty split");
  constexpr Index kGraphsPerChunk = 8;
  Index hits = 0;
  for (Index g0 = 0; g0 < prepared.num_graphs(); g0 += kGraphsPerChunk) {
    std::vector<Index> items;
    for (Index g = g0; g < std::min(prepared.num_graphs(), g0 + kGraphsPerChunk); ++g) {
      const auto& of = prepared.items_of_graph(g);
      items.insert(items.end(), of.begin(), of.end());
    }
    if (items.empty()) continue;
    const auto pred = nn::predict(prepared.forward(model, items).logits);
    for (std::size_t i = 0; i < items.size(); ++i) hits += pred[i] == prepared.label(items[i]);
  }
  return static_cast<double>(hits) / static_cast<double>(prepared.num_items());
}

double evaluate(const nn::Model& model, const LabeledTask& split) {
  if (split.items.empty()) throw InputError("evaluate: empty split");
  return evaluate(model, PreparedTask(model.config, split));
}

TrainReport train(nn::Model& model, const LabeledTask& train_split, const LabeledTask& val_split,
                  const TrainOptions& options) {
  if (options.epochs < 0) throw InputError("epochs must be nonnegative");
  if (train_split.items.empty()) throw InputError("training split has no items");
  const auto start = std::chrono::steady_clock::now();
  const PreparedTask tr(model.config, train_split);
  const PreparedTask va(model.config, val_split);

  TrainReport report;
  report.config = nn::to_json(model.config);
  report.task = train_split.spec.to_json();
  report.wiring = wiring(model.config, train_split.spec.kind);
  report.options = options;
  report.num_parameters = nn::count_parameters(model.config);

  nn::AdamState state = nn::make_adam_state(model);
  const nn::AdamOptions adam{options.lr};
  const Index per_batch = options.graphs_per_batch > 0 ? options.graphs_per_batch : tr.num_graphs();

  for (Index epoch = 0; epoch < options.epochs; ++epoch) {
    double loss_sum = 0.0;
    Index seen = 0;
    for (Index b0 = 0; b0 < tr.num_graphs(); b0 += per_batch) {
      std::vector<Index> items;
      for (Index b = b0; b < std::min(tr.num_graphs(), b0 + per_batch); ++b) {
        const auto& of = tr.items_of_graph(b);
        items.insert(items.end(), of.begin(), of.end());
      }
      if (items.empty()) continue;
      std::vector<int> labels;
      labels.reserve(items.size());
      for (Index i : items) labels.push_back(tr.label(i));
      const nn::Tape tape = tr.forward(model, items);
      const auto loss = nn::softmax_cross_entropy(tape.logits, labels);
      if (!std::isfinite(loss.loss)) {
        throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) + " (lr " +
                           std::to_string(options.lr) + ")");
      }
      const nn::Parameters grads = nn::backward(model, tape, loss.grad);
      nn::adam_step(model, grads, state, adam);
      loss_sum += loss.loss * static_cast<double>(items.size());
      seen += static_cast<Index>(items.size());
    }
    report.epoch_losses.push_back(loss_sum / static_cast<double>(seen));
  }
  report.final_train_accuracy = evaluate(model, tr);
  report.final_val_accuracy = val_split.items.empty() ? 0.0 : evaluate(model, va);
  if (options.record_timing) {
    report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return report;
}

nlohmann::json TrainReport::to_json() const {
  return {
      {"config", config},
      {"task", task},
      {"wiring", wiring},
      {"train",
       {{"epochs", options.epochs},
        {"lr", options.lr},
        {"seed", options.seed},
        {"graphs_per_batch", options.graphs_per_batch},
        {"optimizer", "adam"},
        {"betas", {0.9, 0.999}},
        {"eps", 1e-8}}},
      {"num_parameters", num_parameters},
      {"epoch_losses", epoch_losses},
      {"final_train_accuracy", final_train_accuracy},
      {"final_val_accuracy", final_val_accuracy},
      {"wall_clock_seconds", wall_clock_seconds ? nlohmann::json(*wall_clock_seconds) : nlohmann::json(nullptr)},
  };
}

TrainReport TrainReport::from_json(const nlohmann::json& j) {
  TrainReport r;
  r.config = j.at("config");
  r.task = j.at("task");
  r.wiring = j.at("wiring").get<std::string>();
  const auto& t = j.at("train");
  r.options.epochs = t.at("epochs").get<Index>();
  r.options.lr = t.at("lr").get<double>();
  r.options.seed = t.at("seed").get<std::uint64_t>();
  r.options.graphs_per_batch = t.value("graphs_per_batch", Index{0});
  r.num_parameters = j.at("num_parameters").get<Index>();
  r.epoch_losses = j.at("epoch_losses").get<std::vector<double>>();
  r.final_train_accuracy = j.at("final_train_accuracy").get<double>();
  r.final_val_accuracy = j.at("final_val_accuracy").get<double>();
  if (j.contains("wall_clock_seconds") && j["wall_clock_seconds"].is_number()) {
    r.wall_clock_seconds = j["wall_clock_seconds"].get<double>();
  }
  return r;
}

}  // namespace idgnn::task
