#include "cadpipe/nn/layers.h"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "cadpipe/core/error.h"

namespace cadpipe::nn {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using ConstRowVector = Eigen::Map<const Eigen::RowVectorXd>;
using RowVectorMap = Eigen::Map<Eigen::RowVectorXd>;

void expect_shape(const std::string& layer, const Tensor& x, std::size_t rank) {
  if (x.rank() != rank) {
    throw DataError(layer + ": expected rank-" + std::to_string(rank) + " input, got " +
                    shape_to_string(x.shape()));
  }
}

}  // namespace

void apply_activation(Activation a, std::span<double> values) {
  switch (a) {
    case Activation::kLinear:
      return;
    case Activation::kRelu:
      for (double& v : values) v = v < 0.0 ? 0.0 : v;  // NaN propagates
      return;
    case Activation::kSigmoid:
      for (double& v : values) {
        v = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
      }
      return;
  }
}

void activation_backward(Activation a, std::span<const double> output, std::span<double> grad) {
  switch (a) {
    case Activation::kLinear:
      return;
    case Activation::kRelu:
      for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!(output[i] > 0.0)) grad[i] = 0.0;
      }
      return;
    case Activation::kSigmoid:
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] *= output[i] * (1.0 - output[i]);
      return;
  }
}

// ---------------------------------------------------------------- Conv1D

Conv1D::Conv1D(const Conv1DSpec& spec, std::size_t in_channels)
    : spec_(spec), in_channels_(in_channels) {
  kernel_.name = "kernel";
  kernel_.value = Tensor({spec.kernel, in_channels, spec.filters});
  kernel_.grad = Tensor(kernel_.value.shape());
  kernel_.l2 = spec.l2;
  bias_.name = "bias";
  bias_.value = Tensor({spec.filters});
  bias_.grad = Tensor({spec.filters});
}

std::size_t Conv1D::output_length(std::size_t input_length) const {
  return (input_length + spec_.stride - 1) / spec_.stride;
}

std::size_t Conv1D::pad_left(std::size_t input_length) const {
  const std::size_t out = output_length(input_length);
  const std::size_t needed = (out - 1) * spec_.stride + spec_.kernel;
  const std::size_t total = needed > input_length ? needed - input_length : 0;
  return total / 2;
}

Tensor Conv1D::compute(const Tensor& x, Tensor* columns) const {
  expect_shape("conv1d", x, 3);
  if (x.dim(2) != in_channels_) {
    throw DataError("conv1d: expected " + std::to_string(in_channels_) + " channels, got " +
                    shape_to_string(x.shape()));
  }
  const std::size_t batch = x.dim(0);
  const std::size_t length = x.dim(1);
  const std::size_t out_len = output_length(length);
  const std::size_t pad = pad_left(length);
  const std::size_t k = spec_.kernel;
  const std::size_t c = in_channels_;
  const std::size_t patch = k * c;

  Tensor cols({batch * out_len, patch});
  for (std::size_t b = 0; b < batch; ++b) {
    const double* xb = x.data() + b * length * c;
    for (std::size_t t = 0; t < out_len; ++t) {
      double* row = cols.data() + (b * out_len + t) * patch;
      for (std::size_t j = 0; j < k; ++j) {
        const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(t * spec_.stride + j) -
                                   static_cast<std::ptrdiff_t>(pad);
        if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(length)) continue;
        std::copy_n(xb + static_cast<std::size_t>(pos) * c, c, row + j * c);
      }
    }
  }

  Tensor out({batch, out_len, spec_.filters});
  MatrixMap y(out.data(), static_cast<Eigen::Index>(batch * out_len),
              static_cast<Eigen::Index>(spec_.filters));
  ConstMatrixMap col(cols.data(), static_cast<Eigen::Index>(batch * out_len),
                     static_cast<Eigen::Index>(patch));
  ConstMatrixMap w(kernel_.value.data(), static_cast<Eigen::Index>(patch),
                   static_cast<Eigen::Index>(spec_.filters));
  y.noalias() = col * w;
  y.rowwise() += ConstRowVector(bias_.value.data(), static_cast<Eigen::Index>(spec_.filters));
  apply_activation(spec_.activation, out.values());
  if (columns != nullptr) *columns = std::move(cols);
  return out;
}

Tensor Conv1D::forward(const Tensor& x, Mode, Prng&) {
  input_shape_ = x.shape();
  output_ = compute(x, &columns_);
  return output_;
}

Tensor Conv1D::infer(const Tensor& x) const { return compute(x, nullptr); }

Tensor Conv1D::backward(const Tensor& grad_out) {
  if (grad_out.shape() != output_.shape()) {
    throw DataError("conv1d: gradient shape " + shape_to_string(grad_out.shape()) +
                    " does not match output " + shape_to_string(output_.shape()));
  }
  const std::size_t batch = input_shape_[0];
  const std::size_t length = input_shape_[1];
  const std::size_t out_len = output_.dim(1);
  const std::size_t pad = pad_left(length);
  const std::size_t k = spec_.kernel;
  const std::size_t c = in_channels_;
  const std::size_t patch = k * c;
  const auto rows = static_cast<Eigen::Index>(batch * out_len);
  const auto filters = static_cast<Eigen::Index>(spec_.filters);

  Tensor grad_z = grad_out;
  activation_backward(spec_.activation, output_.values(), grad_z.values());

  ConstMatrixMap dz(grad_z.data(), rows, filters);
  ConstMatrixMap col(columns_.data(), rows, static_cast<Eigen::Index>(patch));
  MatrixMap dw(kernel_.grad.data(), static_cast<Eigen::Index>(patch), filters);
  dw.noalias() = col.transpose() * dz;
  RowVectorMap(bias_.grad.data(), filters) = dz.colwise().sum();

  ConstMatrixMap w(kernel_.value.data(), static_cast<Eigen::Index>(patch), filters);
  RowMatrix dcol = dz * w.transpose();

  Tensor grad_in(input_shape_);
  for (std::size_t b = 0; b < batch; ++b) {
    double* gb = grad_in.data() + b * length * c;
    for (std::size_t t = 0; t < out_len; ++t) {
      const double* row = dcol.data() + (b * out_len + t) * patch;
      for (std::size_t j = 0; j < k; ++j) {
        const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(t * spec_.stride + j) -
                                   static_cast<std::ptrdiff_t>(pad);
        if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(length)) continue;
        double* dst = gb + static_cast<std::size_t>(pos) * c;
        for (std::size_t ch = 0; ch < c; ++ch) dst[ch] += row[j * c + ch];
      }
    }
  }
  return grad_in;
}

// ----------------------------------------------------------------- Dense

Dense::Dense(const DenseSpec& spec, std::size_t inputs) : spec_(spec) {
  weight_.name = "weight";
  weight_.value = Tensor({inputs, spec.units});
  weight_.grad = Tensor(weight_.value.shape());
  weight_.l2 = spec.l2;
  bias_.name = "bias";
  bias_.value = Tensor({spec.units});
  bias_.grad = Tensor({spec.units});
}

Tensor Dense::infer(const Tensor& x) const {
  expect_shape("dense", x, 2);
  const std::size_t inputs = weight_.value.dim(0);
  if (x.dim(1) != inputs) {
    throw DataError("dense: expected " + std::to_string(inputs) + " inputs, got " +
                    shape_to_string(x.shape()));
  }
  const auto batch = static_cast<Eigen::Index>(x.dim(0));
  const auto units = static_cast<Eigen::Index>(spec_.units);
  Tensor out({x.dim(0), spec_.units});
  MatrixMap y(out.data(), batch, units);
  y.noalias() = ConstMatrixMap(x.data(), batch, static_cast<Eigen::Index>(inputs)) *
                ConstMatrixMap(weight_.value.data(), static_cast<Eigen::Index>(inputs), units);
  y.rowwise() += ConstRowVector(bias_.value.data(), units);
  apply_activation(spec_.activation, out.values());
  return out;
}

Tensor Dense::forward(const Tensor& x, Mode, Prng&) {
  output_ = infer(x);
  input_ = x;
  return output_;
}

Tensor Dense::backward(const Tensor& grad_out) {
  if (grad_out.shape() != output_.shape()) {
    throw DataError("dense: gradient shape " + shape_to_string(grad_out.shape()) +
                    " does not match output " + shape_to_string(output_.shape()));
  }
  Tensor grad_z = grad_out;
  activation_backward(spec_.activation, output_.values(), grad_z.values());
  return backward_from_preactivation(grad_z);
}

Tensor Dense::backward_from_preactivation(const Tensor& grad_z) {
  const auto batch = static_cast<Eigen::Index>(input_.dim(0));
  const auto inputs = static_cast<Eigen::Index>(input_.dim(1));
  const auto units = static_cast<Eigen::Index>(spec_.units);
  ConstMatrixMap dz(grad_z.data(), batch, units);
  ConstMatrixMap x(input_.data(), batch, inputs);
  MatrixMap(weight_.grad.data(), inputs, units).noalias() = x.transpose() * dz;
  RowVectorMap(bias_.grad.data(), units) = dz.colwise().sum();
  Tensor grad_in(input_.shape());
  MatrixMap(grad_in.data(), batch, inputs).noalias() =
      dz * ConstMatrixMap(weight_.value.data(), inputs, units).transpose();
  return grad_in;
}

// --------------------------------------------------------------- Dropout

Tensor Dropout::forward(const Tensor& x, Mode mode, Prng& rng) {
  mask_.clear();
  if (mode == Mode::kEval || spec_.p == 0.0) return x;
  const double scale = 1.0 / (1.0 - spec_.p);
  mask_.resize(x.size());
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) {
    mask_[i] = rng.uniform() < spec_.p ? 0.0 : scale;
    out[i] *= mask_[i];
  }
  return out;
}

Tensor Dropout::backward(const Tensor& grad_out) {
  if (mask_.empty()) return grad_out;
  Tensor grad = grad_out;
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] *= mask_[i];
  return grad;
}

// --------------------------------------------------------------- Flatten

Tensor Flatten::infer(const Tensor& x) const {
  if (x.rank() < 1) throw DataError("flatten: scalar input");
  return x.reshaped({x.dim(0), x.row_size()});
}

Tensor Flatten::forward(const Tensor& x, Mode, Prng&) {
  input_shape_ = x.shape();
  return infer(x);
}

Tensor Flatten::backward(const Tensor& grad_out) { return grad_out.reshaped(input_shape_); }

}  // namespace cadpipe::nn
