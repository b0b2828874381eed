#include "idgnn/nn/adam.hpp"

#include "idgnn/errors.hpp"

namespace idgnn::nn {

AdamState make_adam_state(const Model& model) {
  return AdamState{zeros_like(model.params), zeros_like(model.params), 0};
}

void adam_step(Model& model, const Parameters& grads, AdamState& state, const AdamOptions& opt) {
  auto params = tensors(model.params, model.config, true);
  const auto g = tensors(grads, model.config, true);
  auto m = tensors(state.m, model.config, true);
  auto v = tensors(state.v, model.config, true);
  if (g.size() != params.size() || m.size() != params.size() || v.size() != params.size()) {
    throw InputError("adam_step: parameter/gradient/state structure mismatch");
  }
  ++state.step;
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = *params[i].tensor;
    if (g[i]->rows() != p.rows() || g[i]->cols() != p.cols() || m[i].tensor->rows() != p.rows() ||
        m[i].tensor->cols() != p.cols()) {
      throw InputError("adam_step: shape mismatch for " + params[i].name);
    }
    adam_update(p, *g[i], *m[i].tensor, *v[i].tensor, state.step, opt);
  }
  sync_tied(model);
}

}  // namespace idgnn::nn
