#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cadpipe/core/prng.h"
#include "cadpipe/nn/spec.h"
#include "cadpipe/nn/tensor.h"

namespace cadpipe::nn {

enum class Mode { kTrain, kEval };

// A trainable tensor with its gradient and L2 coefficient.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  double l2 = 0.0;
};

// One stage of a sequential network. `forward` caches what `backward`
// needs; `infer` is the read-only evaluation path used by fitted models.
class Layer {
 public:
  virtual ~Layer() = default;

  virtual Tensor forward(const Tensor& x, Mode mode, Prng& rng) = 0;
  virtual Tensor infer(const Tensor& x) const = 0;
  // Writes parameter gradients for the cached batch and returns dL/dx.
  virtual Tensor backward(const Tensor& grad_out) = 0;

  virtual std::vector<Parameter*> parameters() { return {}; }
  virtual std::vector<const Parameter*> parameters() const { return {}; }
  virtual std::string kind() const = 0;
  virtual std::unique_ptr<Layer> clone() const = 0;
};

class Conv1D : public Layer {
 public:
  // Kernel shape (kernel, in_channels, filters), bias (filters).
  Conv1D(const Conv1DSpec& spec, std::size_t in_channels);

  Tensor forward(const Tensor& x, Mode mode, Prng& rng) override;
  Tensor infer(const Tensor& x) const override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<Parameter*> parameters() override { return {&kernel_, &bias_}; }
  std::vector<const Parameter*> parameters() const override { return {&kernel_, &bias_}; }
  std::string kind() const override { return "conv1d"; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Conv1D>(*this); }

  const Conv1DSpec& spec() const { return spec_; }
  std::size_t output_length(std::size_t input_length) const;
  std::size_t pad_left(std::size_t input_length) const;

 private:
  Tensor compute(const Tensor& x, Tensor* columns) const;

  Conv1DSpec spec_;
  std::size_t in_channels_;
  Parameter kernel_;
  Parameter bias_;
  Shape input_shape_;
  Tensor columns_;  // im2col of the cached input
  Tensor output_;
};

class Dense : public Layer {
 public:
  // Weight shape (inputs, units), bias (units).
  Dense(const DenseSpec& spec, std::size_t inputs);

  Tensor forward(const Tensor& x, Mode mode, Prng& rng) override;
  Tensor infer(const Tensor& x) const override;
  Tensor backward(const Tensor& grad_out) override;
  // Backward pass given dL/dz for the pre-activation z directly.
  Tensor backward_from_preactivation(const Tensor& grad_z);
  std::vector<Parameter*> parameters() override { return {&weight_, &bias_}; }
  std::vector<const Parameter*> parameters() const override { return {&weight_, &bias_}; }
  std::string kind() const override { return "dense"; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Dense>(*this); }

  const DenseSpec& spec() const { return spec_; }

 private:
  DenseSpec spec_;
  Parameter weight_;
  Parameter bias_;
  Tensor input_;
  Tensor output_;
};

class Dropout : public Layer {
 public:
  explicit Dropout(const DropoutSpec& spec) : spec_(spec) {}

  Tensor forward(const Tensor& x, Mode mode, Prng& rng) override;
  Tensor infer(const Tensor& x) const override { return x; }
  Tensor backward(const Tensor& grad_out) override;
  std::string kind() const override { return "dropout"; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Dropout>(*this); }

 private:
  DropoutSpec spec_;
  std::vector<double> mask_;  // 0 or 1/(1-p); empty for identity passes
};

class Flatten : public Layer {
 public:
  Tensor forward(const Tensor& x, Mode mode, Prng& rng) override;
  Tensor infer(const Tensor& x) const override;
  Tensor backward(const Tensor& grad_out) override;
  std::string kind() const override { return "flatten"; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Flatten>(*this); }

 private:
  Shape input_shape_;
};

void apply_activation(Activation a, std::span<double> values);
// Multiplies grad by the activation derivative, expressed through the
// activation's output.
void activation_backward(Activation a, std::span<const double> output, std::span<double> grad);

}  // namespace cadpipe::nn
