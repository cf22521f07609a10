#include "cadpipe/nn/train.h"

#include <numeric>

#include "cadpipe/core/error.h"
#include "cadpipe/nn/adam.h"

namespace cadpipe::nn {

TrainedNetwork fit_network(const NetworkSpec& spec, const Tensor& inputs, const Tensor& targets) {
  Prng init = Prng(spec.seed).derive(kInitStream);
  return train(Network::initialize(spec, init), inputs, targets);
}

TrainedNetwork train(Network network, const Tensor& inputs, const Tensor& targets) {
  if (inputs.rank() == 0 || inputs.dim(0) == 0) throw DataError("train: empty input");
  if (targets.rank() == 0 || targets.dim(0) != inputs.dim(0)) {
    throw DataError("train: " + std::to_string(inputs.dim(0)) + " inputs but targets " +
                    shape_to_string(targets.shape()));
  }
  const NetworkSpec spec = network.spec();
  const std::size_t n = inputs.dim(0);
  Prng rng = Prng(spec.seed).derive(kTrainStream);

  TrainedNetwork result{std::move(network), {}, 0};
  auto params = result.network.parameters();
  AdamState state = make_adam_state(params);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += spec.batch_size) {
      const std::size_t stop = std::min(n, start + spec.batch_size);
      const std::span<const std::size_t> rows(order.data() + start, stop - start);
      const Tensor x = gather_rows(inputs, rows);
      const Tensor y = gather_rows(targets, rows);
      const LossBreakdown loss = result.network.loss_and_grad(x, y, rng);
      adam_step(spec.optimizer, state, params);
      ++result.optimizer_steps;
      epoch_loss += loss.total() * static_cast<double>(rows.size());
    }
    result.loss_history.push_back(epoch_loss / static_cast<double>(n));
  }
  return result;
}

}  // namespace cadpipe::nn
