#pragma once

#include <functional>
#include <vector>

#include "cadpipe/nn/network.h"

namespace cadpipe::nn {

struct TrainedNetwork {
  Network network;
  std::vector<double> loss_history;  // sample-weighted mean total loss per epoch
  std::size_t optimizer_steps = 0;
};

// Stream tags derived from NetworkSpec::seed.
inline constexpr std::uint64_t kInitStream = 1;
inline constexpr std::uint64_t kTrainStream = 2;

// Initializes from spec.seed and trains.
TrainedNetwork fit_network(const NetworkSpec& spec, const Tensor& inputs, const Tensor& targets);

// Mini-batch Adam over `epochs`; the sample order is reshuffled every epoch
// and the last batch may be short. Throws DataError on empty or misaligned
// inputs.
TrainedNetwork train(Network network, const Tensor& inputs, const Tensor& targets);

}  // namespace cadpipe::nn
