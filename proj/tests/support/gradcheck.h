#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "cadpipe/core/prng.h"
#include "cadpipe/nn/loss.h"
#include "cadpipe/nn/network.h"
#include "oracles.h"

namespace cadpipe::testing {

// Objective evaluated by finite differences: data loss + L2 penalty with the
// dropout masks pinned by re-seeding the stream on every evaluation.
inline double objective(nn::Network& net, const nn::Tensor& x, const nn::Tensor& y,
                        std::uint64_t mask_seed) {
  Prng rng(mask_seed);
  const nn::Tensor out = net.forward(x, nn::Mode::kTrain, rng);
  return nn::loss_value(net.spec().loss, out, y) + net.l2_penalty();
}

// Smallest |pre-activation| over every relu layer, computed by rebuilding the
// network prefix with that layer's activation switched to linear.
inline double min_abs_relu_preactivation(const nn::Network& net, const nn::Tensor& x,
                                         std::uint64_t mask_seed) {
  double smallest = std::numeric_limits<double>::infinity();
  const auto& spec = net.spec();
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    nn::LayerSpec probe_layer = spec.layers[i];
    bool relu = false;
    if (auto* c = std::get_if<nn::Conv1DSpec>(&probe_layer); c && c->activation == nn::Activation::kRelu) {
      c->activation = nn::Activation::kLinear;
      relu = true;
    } else if (auto* d = std::get_if<nn::DenseSpec>(&probe_layer);
               d && d->activation == nn::Activation::kRelu) {
      d->activation = nn::Activation::kLinear;
      relu = true;
    }
    if (!relu) continue;
    nn::NetworkSpec prefix = spec;
    prefix.layers.assign(spec.layers.begin(), spec.layers.begin() + static_cast<std::ptrdiff_t>(i));
    prefix.layers.push_back(probe_layer);
    if (std::holds_alternative<nn::Conv1DSpec>(probe_layer)) prefix.layers.push_back(nn::FlattenSpec{});
    Prng unused(0);
    nn::Network probe = nn::Network::initialize(prefix, unused);
    const auto src = net.parameters();
    auto dst = probe.parameters();
    for (std::size_t p = 0; p < dst.size(); ++p) dst[p]->value = src[p]->value;
    Prng rng(mask_seed);
    const nn::Tensor z = probe.forward(x, nn::Mode::kTrain, rng);
    for (double v : z.values()) smallest = std::min(smallest, std::abs(v));
  }
  return smallest;
}

// Max relative error between backprop gradients and central differences
// over every parameter of the network.
inline double max_gradient_error(nn::Network& net, const nn::Tensor& x, const nn::Tensor& y,
                                 std::uint64_t mask_seed, double h = 1e-5) {
  {
    Prng rng(mask_seed);
    net.loss_and_grad(x, y, rng);
  }
  std::vector<std::vector<double>> analytic;
  for (const auto* p : net.parameters()) {
    analytic.emplace_back(p->grad.values().begin(), p->grad.values().end());
  }
  double worst = 0.0;
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto numeric = oracle::central_differences(
        params[i]->value.values(), [&] { return objective(net, x, y, mask_seed); }, h);
    for (std::size_t j = 0; j < numeric.size(); ++j) {
      worst = std::max(worst, oracle::relative_error(analytic[i][j], numeric[j]));
    }
  }
  return worst;
}

}  // namespace cadpipe::testing
