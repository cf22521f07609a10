#include "cadpipe/nn/loss.h"

#include <algorithm>
#include <cmath>

#include "cadpipe/core/error.h"

namespace cadpipe::nn {
namespace {

void check(const Tensor& predictions, const Tensor& targets) {
  if (predictions.shape() != targets.shape()) {
    throw DataError("loss: predictions " + shape_to_string(predictions.shape()) +
                    " and targets " + shape_to_string(targets.shape()) + " differ");
  }
  if (predictions.rank() == 0 || predictions.dim(0) == 0) throw DataError("loss: empty batch");
}

}  // namespace

double loss_value(LossKind loss, const Tensor& predictions, const Tensor& targets) {
  check(predictions, targets);
  const double batch = static_cast<double>(predictions.dim(0));
  double sum = 0.0;
  if (loss == LossKind::kBinaryCrossEntropy) {
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      const double p = std::clamp(predictions[i], kBceClamp, 1.0 - kBceClamp);
      const double y = targets[i];
      sum -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    }
    return sum / batch;
  }
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - targets[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predictions.size());
}

Tensor loss_gradient(LossKind loss, const Tensor& predictions, const Tensor& targets) {
  check(predictions, targets);
  Tensor grad(predictions.shape());
  if (loss == LossKind::kBinaryCrossEntropy) {
    const double batch = static_cast<double>(predictions.dim(0));
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      const double p = predictions[i];
      if (p < kBceClamp || p > 1.0 - kBceClamp) continue;  // clamped: flat
      grad[i] = (p - targets[i]) / (p * (1.0 - p)) / batch;
    }
    return grad;
  }
  const double n = static_cast<double>(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    grad[i] = 2.0 * (predictions[i] - targets[i]) / n;
  }
  return grad;
}

Tensor bce_sigmoid_preactivation_gradient(const Tensor& predictions, const Tensor& targets) {
  check(predictions, targets);
  const double batch = static_cast<double>(predictions.dim(0));
  Tensor grad(predictions.shape());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    grad[i] = (predictions[i] - targets[i]) / batch;
  }
  return grad;
}

}  // namespace cadpipe::nn
