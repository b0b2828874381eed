#include "idgnn/nn/model.hpp"

#include "idgnn/errors.hpp"
#include "idgnn/random.hpp"

#include <cmath>

namespace idgnn::nn {

namespace {

template <class P, class F>
void visit(P& p, const ModelConfig& config, bool trainable_only, F&& f) {
  const bool skip_msg1 = trainable_only && !config.heterogeneous();
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    auto& l = p.layers[i];
    const std::string prefix = "layers." + std::to_string(i) + ".";
    f(prefix + "msg0_weight", l.msg0_weight);
    f(prefix + "msg0_bias", l.msg0_bias);
    if (!skip_msg1) {
      f(prefix + "msg1_weight", l.msg1_weight);
      f(prefix + "msg1_bias", l.msg1_bias);
    }
    f(prefix + "update_weight", l.update_weight);
    f(prefix + "update_bias", l.update_bias);
    f(prefix + "gin_epsilon", l.gin_epsilon);
  }
  f("head.hidden_weight", p.head.hidden_weight);
  f("head.hidden_bias", p.head.hidden_bias);
  f("head.out_weight", p.head.out_weight);
  f("head.out_bias", p.head.out_bias);
}

void fill_uniform(Matrix& m, Index rows, Index cols, Index fan_in, Rng& rng) {
  m.resize(rows, cols);
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<Index>(fan_in, 1)));
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
  }
}

}  // namespace

std::vector<TensorRef> tensors(Parameters& p, const ModelConfig& config, bool trainable_only) {
  std::vector<TensorRef> out;
  visit(p, config, trainable_only, [&](std::string name, Matrix& m) {
    if (m.size() > 0) out.push_back({std::move(name), &m});
  });
  return out;
}

std::vector<const Matrix*> tensors(const Parameters& p, const ModelConfig& config, bool trainable_only) {
  std::vector<const Matrix*> out;
  visit(p, config, trainable_only, [&](const std::string&, const Matrix& m) {
    if (m.size() > 0) out.push_back(&m);
  });
  return out;
}

Parameters zeros_like(const Parameters& p) {
  Parameters z = p;
  ModelConfig all;
  all.variant = Variant::id_full;
  for (auto& t : tensors(z, all, false)) t.tensor->setZero();
  return z;
}

Model init_model(const ModelConfig& config) {
  config.validate();
  Model model{config, {}};
  Rng rng(config.seed);
  Index in = config.layer0_input_dim();
  const Index h = config.hidden_dim;
  for (Index i = 0; i < config.num_layers; ++i) {
    LayerParams l;
    const Index msg_in = in + config.edge_dim;
    fill_uniform(l.msg0_weight, msg_in, h, msg_in, rng);
    fill_uniform(l.msg0_bias, 1, h, msg_in, rng);
    if (config.heterogeneous()) {
      fill_uniform(l.msg1_weight, msg_in, h, msg_in, rng);
      fill_uniform(l.msg1_bias, 1, h, msg_in, rng);
    } else {
      l.msg1_weight = l.msg0_weight;
      l.msg1_bias = l.msg0_bias;
    }
    switch (config.flavor) {
      case Flavor::sage:
        fill_uniform(l.update_weight, h + in, h, h + in, rng);
        fill_uniform(l.update_bias, 1, h, h + in, rng);
        break;
      case Flavor::gin:
        fill_uniform(l.update_weight, h, h, h, rng);
        fill_uniform(l.update_bias, 1, h, h, rng);
        l.gin_epsilon = Matrix::Zero(1, 1);
        break;
      case Flavor::gcn: break;
    }
    model.params.layers.push_back(std::move(l));
    in = h;
  }
  auto& head = model.params.head;
  if (config.pair_head()) {
    fill_uniform(head.hidden_weight, 2 * h, h, 2 * h, rng);
    fill_uniform(head.hidden_bias, 1, h, 2 * h, rng);
  }
  fill_uniform(head.out_weight, h, config.output_dim, h, rng);
  fill_uniform(head.out_bias, 1, config.output_dim, h, rng);
  return model;
}

void sync_tied(Model& model) {
  if (model.config.heterogeneous()) return;
  for (auto& l : model.params.layers) {
    l.msg1_weight = l.msg0_weight;
    l.msg1_bias = l.msg0_bias;
  }
}

void tie_gradients(Parameters& grads, const ModelConfig& config) {
  if (config.heterogeneous()) return;
  for (auto& l : grads.layers) {
    l.msg0_weight += l.msg1_weight;
    l.msg0_bias += l.msg1_bias;
    l.msg1_weight = l.msg0_weight;
    l.msg1_bias = l.msg0_bias;
  }
}

Index count_parameters(const ModelConfig& config) {
  config.validate();
  const Index h = config.hidden_dim;
  Index in = config.layer0_input_dim();
  Index total = 0;
  for (Index i = 0; i < config.num_layers; ++i) {
    const Index msg = (in + config.edge_dim) * h + h;
    total += config.heterogeneous() ? 2 * msg : msg;
    if (config.flavor == Flavor::sage) total += (h + in) * h + h;
    if (config.flavor == Flavor::gin) total += h * h + h + 1;
    in = h;
  }
  if (config.pair_head()) total += 2 * h * h + h;
  return total + h * config.output_dim + config.output_dim;
}

Index hidden_dim_for_budget(ModelConfig config, Index budget) {
  Index best = 1;
  for (Index h = 1; h <= 4096; ++h) {
    config.hidden_dim = h;
    if (count_parameters(config) > budget) break;
    best = h;
  }
  return best;
}

}  // namespace idgnn::nn
