#include "cadpipe/nn/network.h"

#include <algorithm>
#include <cmath>

#include "cadpipe/core/error.h"
#include "cadpipe/nn/loss.h"

namespace cadpipe::nn {
namespace {

void glorot_fill(Tensor& w, std::size_t fan_in, std::size_t fan_out, Prng& rng) {
  const double bound = glorot_bound(fan_in, fan_out);
  for (double& v : w.values()) v = rng.uniform(-bound, bound);
}

void check_finite(const Tensor& t, std::size_t layer, const Layer& l, const char* pass) {
  if (!t.all_finite()) {
    throw NumericError(std::string("non-finite value in ") + pass + " pass at layer " +
                           std::to_string(layer) + " (" + l.kind() + ")",
                       static_cast<int>(layer));
  }
}

}  // namespace

double glorot_bound(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

Network Network::initialize(const NetworkSpec& spec, Prng& rng) {
  spec.validate();
  Network net;
  net.spec_ = spec;
  Shape current = spec.input_shape;
  const auto shapes = spec.output_shapes();
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const auto& ls = spec.layers[i];
    if (const auto* conv = std::get_if<Conv1DSpec>(&ls)) {
      auto layer = std::make_unique<Conv1D>(*conv, current[1]);
      glorot_fill(layer->parameters()[0]->value, conv->kernel * current[1],
                  conv->kernel * conv->filters, rng);
      net.layers_.push_back(std::move(layer));
    } else if (const auto* dense = std::get_if<DenseSpec>(&ls)) {
      auto layer = std::make_unique<Dense>(*dense, current[0]);
      glorot_fill(layer->parameters()[0]->value, current[0], dense->units, rng);
      net.layers_.push_back(std::move(layer));
    } else if (const auto* drop = std::get_if<DropoutSpec>(&ls)) {
      net.layers_.push_back(std::make_unique<Dropout>(*drop));
    } else {
      net.layers_.push_back(std::make_unique<Flatten>());
    }
    current = shapes[i];
  }
  return net;
}

Network::Network(const Network& other) : spec_(other.spec_) {
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

Network& Network::operator=(const Network& other) {
  if (this != &other) {
    Network copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Tensor Network::forward(const Tensor& batch, Mode mode, Prng& rng) {
  Shape expected = spec_.input_shape;
  expected.insert(expected.begin(), batch.rank() ? batch.dim(0) : 0);
  if (batch.shape() != expected) {
    throw DataError("network: input shape " + shape_to_string(batch.shape()) +
                    " does not match " + shape_to_string(expected));
  }
  Tensor x = batch;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    x = layers_[i]->forward(x, mode, rng);
    check_finite(x, i, *layers_[i], "forward");
  }
  return x;
}

Tensor Network::predict(const Tensor& batch, std::size_t chunk) const {
  Shape expected = spec_.input_shape;
  expected.insert(expected.begin(), batch.rank() ? batch.dim(0) : 0);
  if (batch.shape() != expected) {
    throw DataError("network: input shape " + shape_to_string(batch.shape()) +
                    " does not match " + shape_to_string(expected));
  }
  const std::size_t n = batch.dim(0);
  Shape out_shape = spec_.output_shape();
  out_shape.insert(out_shape.begin(), n);
  Tensor out(out_shape);
  const std::size_t out_width = out.row_size();
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t stop = std::min(n, start + chunk);
    rows.resize(stop - start);
    for (std::size_t i = start; i < stop; ++i) rows[i - start] = i;
    Tensor x = gather_rows(batch, rows);
    for (const auto& layer : layers_) x = layer->infer(x);
    std::copy_n(x.data(), x.size(), out.data() + start * out_width);
  }
  return out;
}

LossBreakdown Network::loss_and_grad(const Tensor& batch, const Tensor& targets, Prng& rng,
                                     Mode mode) {
  const Tensor predictions = forward(batch, mode, rng);
  LossBreakdown loss;
  loss.data = loss_value(spec_.loss, predictions, targets);
  loss.l2 = l2_penalty();
  if (!std::isfinite(loss.total())) {
    throw NumericError("non-finite loss", static_cast<int>(layers_.size()) - 1);
  }

  std::size_t i = layers_.size();
  Tensor grad;
  auto* last_dense = layers_.empty() ? nullptr : dynamic_cast<Dense*>(layers_.back().get());
  if (last_dense != nullptr && spec_.loss == LossKind::kBinaryCrossEntropy &&
      last_dense->spec().activation == Activation::kSigmoid) {
    grad = last_dense->backward_from_preactivation(
        bce_sigmoid_preactivation_gradient(predictions, targets));
    --i;
  } else {
    grad = loss_gradient(spec_.loss, predictions, targets);
  }
  while (i > 0) {
    --i;
    grad = layers_[i]->backward(grad);
    check_finite(grad, i, *layers_[i], "backward");
  }
  for (auto* p : parameters()) {
    if (p->l2 == 0.0) continue;
    for (std::size_t j = 0; j < p->value.size(); ++j) p->grad[j] += 2.0 * p->l2 * p->value[j];
  }
  return loss;
}

double Network::l2_penalty() const {
  double penalty = 0.0;
  for (const auto* p : parameters()) {
    if (p->l2 == 0.0) continue;
    double sq = 0.0;
    for (double v : p->value.values()) sq += v * v;
    penalty += p->l2 * sq;
  }
  return penalty;
}

std::vector<Parameter*> Network::parameters() {
  std::vector<Parameter*> out;
  for (auto& l : layers_) {
    for (auto* p : l->parameters()) out.push_back(p);
  }
  return out;
}

std::vector<const Parameter*> Network::parameters() const {
  std::vector<const Parameter*> out;
  for (const auto& l : layers_) {
    for (const auto* p : static_cast<const Layer&>(*l).parameters()) out.push_back(p);
  }
  return out;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto* p : parameters()) n += p->value.size();
  return n;
}

}  // namespace cadpipe::nn
