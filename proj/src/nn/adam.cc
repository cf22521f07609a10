#include "cadpipe/nn/adam.h"

#include <cmath>

#include "cadpipe/core/error.h"

namespace cadpipe::nn {

AdamState make_adam_state(std::span<Parameter* const> params) {
  AdamState state;
  for (const auto* p : params) {
    state.m.emplace_back(p->value.shape());
    state.v.emplace_back(p->value.shape());
  }
  return state;
}

void adam_step(const AdamParams& params, AdamState& state, std::span<Parameter* const> weights) {
  if (state.m.size() != weights.size() || state.v.size() != weights.size()) {
    throw DataError("adam: state tracks " + std::to_string(state.m.size()) +
                    " tensors, got " + std::to_string(weights.size()));
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const Parameter& p = *weights[i];
    if (state.m[i].shape() != p.value.shape() || state.v[i].shape() != p.value.shape() ||
        p.grad.shape() != p.value.shape()) {
      throw DataError("adam: shape mismatch for parameter " + std::to_string(i) + " (" +
                      shape_to_string(p.value.shape()) + ")");
    }
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double correction1 = 1.0 - std::pow(params.beta1, t);
  const double correction2 = 1.0 - std::pow(params.beta2, t);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    Parameter& p = *weights[i];
    double* m = state.m[i].data();
    double* v = state.v[i].data();
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      const double g = p.grad[j];
      m[j] = params.beta1 * m[j] + (1.0 - params.beta1) * g;
      v[j] = params.beta2 * v[j] + (1.0 - params.beta2) * g * g;
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      p.value[j] -= params.lr * m_hat / (std::sqrt(v_hat) + params.epsilon);
    }
  }
}

}  // namespace cadpipe::nn
