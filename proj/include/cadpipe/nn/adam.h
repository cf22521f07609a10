#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cadpipe/nn/layers.h"
#include "cadpipe/nn/spec.h"

namespace cadpipe::nn {

// First and second moment estimates, one pair per parameter tensor.
struct AdamState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::uint64_t t = 0;
};

AdamState make_adam_state(std::span<Parameter* const> params);

// One bias-corrected Adam update using each parameter's current gradient:
//   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2,  t <- t + 1
//   w <- w - lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
// Throws DataError when state and parameter shapes disagree.
void adam_step(const AdamParams& params, AdamState& state, std::span<Parameter* const> weights);

}  // namespace cadpipe::nn
