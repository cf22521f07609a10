#pragma once

#include "cadpipe/nn/spec.h"
#include "cadpipe/nn/tensor.h"

namespace cadpipe::nn {

inline constexpr double kBceClamp = 1e-7;

// Data term only, averaged over the batch. Binary cross entropy sums over
// output units and clamps predictions to [1e-7, 1 - 1e-7] before the log;
// mean squared error averages over every element.
double loss_value(LossKind loss, const Tensor& predictions, const Tensor& targets);

// d(loss_value)/d(predictions).
Tensor loss_gradient(LossKind loss, const Tensor& predictions, const Tensor& targets);

// Binary cross entropy through a sigmoid output, differentiated with
// respect to the pre-activation: (p - y) / batch. The clamp is not applied.
Tensor bce_sigmoid_preactivation_gradient(const Tensor& predictions, const Tensor& targets);

}  // namespace cadpipe::nn
