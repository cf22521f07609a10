#pragma once

#include <cstdint>
#include <vector>

#include "cadpipe/models/classifier.h"
#include "cadpipe/nn/network.h"

namespace cadpipe::models {

// Four same-padded Conv1D layers, Flatten, four Dense+Dropout blocks and a
// two-unit sigmoid output scored against one-hot (negative, positive)
// targets with binary cross entropy.
struct CnnConfig {
  std::vector<std::size_t> conv_filters{256, 256, 256, 256};
  std::size_t kernel = 3;
  std::size_t stride = 1;
  double conv_l2 = 0.2;
  std::vector<std::size_t> dense_units{256, 128, 64, 32, 2};
  double dropout = 0.5;
  double lr = 0.001;
  std::size_t epochs = 100;
  std::size_t batch_size = 256;

  // Throws ConfigError unless there are exactly 4 conv and 5 dense layers,
  // the last of width 2, and every size is positive.
  void validate() const;
};

// Throws ConfigError when n_features < kernel.
nn::NetworkSpec build_cnn(const CnnConfig& cfg, std::size_t n_features, std::uint64_t seed = 0);

// Conv and Dense layers only; Flatten and Dropout are not counted.
std::size_t main_layer_count(const nn::NetworkSpec& spec);

// (o_neg, o_pos) rows -> o_pos / (o_neg + o_pos), or 0.5 when both are 0.
std::vector<double> cnn_scores_from_outputs(const nn::Tensor& outputs);

class CnnClassifier final : public Classifier {
 public:
  explicit CnnClassifier(nn::Network network) : network_(std::move(network)) {}

  std::string_view name() const override { return "cnn"; }
  std::vector<double> predict_scores(const Matrix& features) const override;

  const nn::Network& network() const { return network_; }

 private:
  nn::Network network_;
};

ClassifierPtr fit_cnn(const Dataset& train, const CnnConfig& cfg, std::uint64_t seed);

// (n, d) features as an (n, d, 1) tensor.
nn::Tensor sequence_tensor(const Matrix& features);

}  // namespace cadpipe::models
