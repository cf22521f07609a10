#pragma once

#include <memory>
#include <vector>

#include "cadpipe/core/prng.h"
#include "cadpipe/nn/layers.h"
#include "cadpipe/nn/spec.h"

namespace cadpipe::nn {

struct LossBreakdown {
  double data = 0.0;
  double l2 = 0.0;
  double total() const { return data + l2; }
};

// Sequential layer stack built from a NetworkSpec.
class Network {
 public:
  // Glorot-uniform weights, zero biases. Conv kernels use
  // fan_in = kernel * in_channels and fan_out = kernel * filters.
  // Throws ConfigError for an inconsistent spec.
  static Network initialize(const NetworkSpec& spec, Prng& rng);

  Network(const Network& other);
  Network& operator=(const Network& other);
  Network(Network&&) noexcept = default;
  Network& operator=(Network&&) noexcept = default;

  const NetworkSpec& spec() const { return spec_; }
  std::size_t layer_count() const { return layers_.size(); }
  const Layer& layer(std::size_t i) const { return *layers_[i]; }

  // Caching pass for training. The input's leading axis is the batch.
  // Throws NumericError naming the first layer with a non-finite output.
  Tensor forward(const Tensor& batch, Mode mode, Prng& rng);

  // Read-only evaluation pass (dropout is the identity). Large inputs are
  // processed in chunks of `chunk` samples.
  Tensor predict(const Tensor& batch, std::size_t chunk = 256) const;

  // Forward in `mode`, loss including the L2 term, and reverse-mode
  // gradients written into every parameter. A sigmoid output trained with
  // binary cross entropy is differentiated through its pre-activation.
  LossBreakdown loss_and_grad(const Tensor& batch, const Tensor& targets, Prng& rng,
                              Mode mode = Mode::kTrain);

  // sum over layers of l2 * sum(w^2), biases excluded.
  double l2_penalty() const;

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  std::size_t parameter_count() const;

 private:
  Network() = default;

  NetworkSpec spec_;
  std::vector<std::unique_ptr<Layer>> layers_;
};

double glorot_bound(std::size_t fan_in, std::size_t fan_out);

}  // namespace cadpipe::nn
