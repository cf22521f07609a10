#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cadpipe/nn/tensor.h"

namespace cadpipe::nn {

enum class Activation { kLinear, kRelu, kSigmoid };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view s);

// 1-D convolution over (length, channels) inputs with zero `same` padding.
struct Conv1DSpec {
  std::size_t filters = 1;
  std::size_t kernel = 3;
  std::size_t stride = 1;
  double l2 = 0.0;
  Activation activation = Activation::kRelu;
  bool operator==(const Conv1DSpec&) const = default;
};

struct DenseSpec {
  std::size_t units = 1;
  double l2 = 0.0;
  Activation activation = Activation::kLinear;
  bool operator==(const DenseSpec&) const = default;
};

// Inverted dropout: zeroes with probability p, scales survivors by 1/(1-p).
struct DropoutSpec {
  double p = 0.5;
  bool operator==(const DropoutSpec&) const = default;
};

struct FlattenSpec {
  bool operator==(const FlattenSpec&) const = default;
};

using LayerSpec = std::variant<Conv1DSpec, DenseSpec, DropoutSpec, FlattenSpec>;

std::string_view layer_kind(const LayerSpec& spec);

enum class LossKind { kBinaryCrossEntropy, kMeanSquaredError };

std::string_view to_string(LossKind loss);

struct AdamParams {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;

  void validate() const;
  bool operator==(const AdamParams&) const = default;
};

struct NetworkSpec {
  Shape input_shape;  // per sample, without the batch axis
  std::vector<LayerSpec> layers;
  LossKind loss = LossKind::kBinaryCrossEntropy;
  AdamParams optimizer;
  std::size_t epochs = 1;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;

  // Per-sample output shape of every layer. Throws ConfigError naming the
  // first layer whose input shape it cannot accept.
  std::vector<Shape> output_shapes() const;

  Shape output_shape() const;
  void validate() const;

  bool operator==(const NetworkSpec&) const = default;
};

std::string spec_to_json(const NetworkSpec& spec);
NetworkSpec spec_from_json(std::string_view text);

}  // namespace cadpipe::nn
