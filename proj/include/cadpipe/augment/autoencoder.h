#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cadpipe/core/dataset.h"
#include "cadpipe/nn/network.h"

namespace cadpipe::augment {

// Dense(hidden_dim, relu) -> Dense(input_dim, sigmoid), trained on MSE.
struct AutoencoderSpec {
  std::size_t input_dim = 57;
  std::size_t hidden_dim = 32;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  double lr = 0.001;
  std::uint64_t seed = 0;

  // Throws ConfigError unless input_dim >= hidden_dim >= 1.
  void validate() const;
  nn::NetworkSpec network_spec() const;
};

struct Autoencoder {
  nn::Network network;
  std::vector<double> loss_history;
  // Mean squared reconstruction error over the training set, measured with
  // the final weights.
  double final_mse = 0.0;

  std::size_t input_dim() const { return network.spec().input_shape.at(0); }
};

// Features must already be scaled into [0, 1]; anything outside
// [-0.01, 1.01] throws DataError.
Autoencoder train_autoencoder(const Dataset& ds, const AutoencoderSpec& spec);

// One reconstructed row per input row. Throws DataError on a column count
// that does not match the autoencoder.
Matrix reconstruct(const Autoencoder& ae, const Matrix& features);

// Per-row mean squared difference.
std::vector<double> row_errors(const Matrix& a, const Matrix& b);
double mean_squared_error(const Matrix& a, const Matrix& b);

// Source rows whose reconstructions are kept when only `quota` of them fit.
// The quota is split across classes in proportion to their counts (largest
// remainder, positive class first on ties); within a class the rows with
// the largest error win, ties going to the lower row index. Returned in
// ascending row order.
std::vector<std::size_t> select_reconstructions(std::span<const double> errors,
                                                std::span<const Label> labels, std::size_t quota);

// Inputs in their original order followed by reconstructions labelled like
// their source rows. Without target_total every row contributes one
// reconstruction; with target_total = T exactly T - n are kept.
// Throws DataError unless n <= T <= 2n.
AugmentedDataset augment(const AugmentedDataset& input, const Autoencoder& ae,
                         std::optional<std::size_t> target_total = std::nullopt);
AugmentedDataset augment(const Dataset& ds, const Autoencoder& ae,
                         std::optional<std::size_t> target_total = std::nullopt);

}  // namespace cadpipe::augment
