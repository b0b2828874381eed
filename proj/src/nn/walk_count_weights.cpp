#include "idgnn/nn/walk_count_weights.hpp"

#include "idgnn/errors.hpp"

namespace idgnn::nn {

Model make_walk_count_model(Index k) {
  if (k < 1) throw InputError("make_walk_count_model: k must be >= 1");
  ModelConfig c;
  c.flavor = Flavor::sage;
  c.variant = Variant::id_full;
  c.task_level = TaskLevel::node;
  c.aggregation = Aggregation::sum;
  c.num_layers = k;
  c.hidden_dim = k;
  c.input_dim = 1;
  c.output_dim = 1;
  Model m = init_model(c);
  for (Index layer = 0; layer < k; ++layer) {
    auto& p = m.params.layers[layer];
    const Index in = p.msg0_weight.rows();
    p.msg0_weight.setZero();
    if (layer > 0) {
      for (Index j = 1; j < k; ++j) p.msg0_weight(j - 1, j) = 1.0;
    }
    p.msg1_weight = p.msg0_weight;
    p.msg0_bias.setZero();
    p.msg1_bias.setZero();
    p.msg1_bias(0, 0) = 1.0;
    p.update_weight = Matrix::Zero(k + in, k);
    p.update_weight.topRows(k).setIdentity();
    p.update_bias.setZero();
  }
  return m;
}

}  // namespace idgnn::nn
