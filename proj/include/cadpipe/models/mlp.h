#pragma once

#include <cstdint>
#include <vector>

#include "cadpipe/models/classifier.h"
#include "cadpipe/nn/network.h"

namespace cadpipe::models {

struct MlpConfig {
  std::vector<std::size_t> hidden{64, 32};
  double lr = 0.001;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;

  void validate() const;
};

// Dense relu stack with one sigmoid output, trained on binary cross entropy.
nn::NetworkSpec build_mlp(const MlpConfig& cfg, std::size_t n_features, std::uint64_t seed = 0);

class MlpClassifier final : public Classifier {
 public:
  explicit MlpClassifier(nn::Network network) : network_(std::move(network)) {}

  std::string_view name() const override { return "mlp"; }
  std::vector<double> predict_scores(const Matrix& features) const override;

  const nn::Network& network() const { return network_; }

 private:
  nn::Network network_;
};

ClassifierPtr fit_mlp(const Dataset& train, const MlpConfig& cfg, std::uint64_t seed);

}  // namespace cadpipe::models
