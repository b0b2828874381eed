#pragma once

#include "idgnn/nn/model.hpp"

namespace idgnn::nn {

/// An id_full sage model (SUM aggregation, input [1], hidden width k,
/// k layers) loaded with the explicit walk-counting weights: the first
/// layer's colored message is the constant e_1, later layers shift the
/// neighbor's vector by one slot and the colored sender adds e_1, and the
/// update passes the aggregate through unchanged. With nonnegative counts
/// every ReLU is the identity, so the center embedding after k layers holds
/// the closed-walk counts of lengths 1..k.
Model make_walk_count_model(Index k);

}  // namespace idgnn::nn
