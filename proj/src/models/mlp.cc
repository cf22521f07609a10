#include "cadpipe/models/mlp.h"

#include "cadpipe/core/error.h"
#include "cadpipe/nn/train.h"

namespace cadpipe::models {

void MlpConfig::validate() const {
  for (std::size_t u : hidden) {
    if (u == 0) throw ConfigError("mlp: hidden widths must be positive");
  }
  if (epochs == 0 || batch_size == 0) throw ConfigError("mlp: epochs and batch_size must be positive");
  if (!(lr > 0.0)) throw ConfigError("mlp: lr must be positive");
}

nn::NetworkSpec build_mlp(const MlpConfig& cfg, std::size_t n_features, std::uint64_t seed) {
  cfg.validate();
  nn::NetworkSpec spec;
  spec.input_shape = {n_features};
  for (std::size_t u : cfg.hidden) spec.layers.push_back(nn::DenseSpec{u, 0.0, nn::Activation::kRelu});
  spec.layers.push_back(nn::DenseSpec{1, 0.0, nn::Activation::kSigmoid});
  spec.loss = nn::LossKind::kBinaryCrossEntropy;
  spec.optimizer.lr = cfg.lr;
  spec.epochs = cfg.epochs;
  spec.batch_size = cfg.batch_size;
  spec.seed = seed;
  return spec;
}

std::vector<double> MlpClassifier::predict_scores(const Matrix& features) const {
  if (features.rows() == 0) return {};
  const nn::Tensor out = network_.predict(nn::Tensor({features.rows(), features.cols()}, features.data()));
  return {out.values().begin(), out.values().end()};
}

ClassifierPtr fit_mlp(const Dataset& train, const MlpConfig& cfg, std::uint64_t seed) {
  require_both_classes(train, "mlp");
  const nn::NetworkSpec spec = build_mlp(cfg, train.n_features(), seed);
  const auto y = labels_as_doubles(train.labels);
  auto trained = nn::fit_network(spec, nn::Tensor({train.n_samples(), train.n_features()}, train.features.data()),
                                 nn::Tensor({train.n_samples(), 1}, y));
  return std::make_unique<MlpClassifier>(std::move(trained.network));
}

}  // namespace cadpipe::models
