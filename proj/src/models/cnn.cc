#include "cadpipe/models/cnn.h"

#include <string>
#include <variant>

#include "cadpipe/core/error.h"
#include "cadpipe/nn/train.h"

namespace cadpipe::models {

void CnnConfig::validate() const {
  if (conv_filters.size() != 4) {
    throw ConfigError("cnn: expected 4 conv layers, got " + std::to_string(conv_filters.size()));
  }
  if (dense_units.size() != 5) {
    throw ConfigError("cnn: expected 5 dense layers, got " + std::to_string(dense_units.size()));
  }
  if (dense_units.back() != 2) {
    throw ConfigError("cnn: the output layer must have 2 units, got " +
                      std::to_string(dense_units.back()));
  }
  for (std::size_t f : conv_filters) {
    if (f == 0) throw ConfigError("cnn: conv filters must be positive");
  }
  for (std::size_t u : dense_units) {
    if (u == 0) throw ConfigError("cnn: dense units must be positive");
  }
  if (kernel == 0 || stride == 0) throw ConfigError("cnn: kernel and stride must be positive");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("cnn: dropout must be in [0, 1)");
  if (conv_l2 < 0.0) throw ConfigError("cnn: conv_l2 must be non-negative");
  if (epochs == 0 || batch_size == 0) throw ConfigError("cnn: epochs and batch_size must be positive");
  if (!(lr > 0.0)) throw ConfigError("cnn: lr must be positive");
}

nn::NetworkSpec build_cnn(const CnnConfig& cfg, std::size_t n_features, std::uint64_t seed) {
  cfg.validate();
  if (n_features < cfg.kernel) {
    throw ConfigError("cnn: " + std::to_string(n_features) + " features is fewer than kernel " +
                      std::to_string(cfg.kernel));
  }
  nn::NetworkSpec spec;
  spec.input_shape = {n_features, 1};
  for (std::size_t f : cfg.conv_filters) {
    spec.layers.push_back(nn::Conv1DSpec{f, cfg.kernel, cfg.stride, cfg.conv_l2, nn::Activation::kRelu});
  }
  spec.layers.push_back(nn::FlattenSpec{});
  for (std::size_t i = 0; i + 1 < cfg.dense_units.size(); ++i) {
    spec.layers.push_back(nn::DenseSpec{cfg.dense_units[i], 0.0, nn::Activation::kRelu});
    spec.layers.push_back(nn::DropoutSpec{cfg.dropout});
  }
  spec.layers.push_back(nn::DenseSpec{cfg.dense_units.back(), 0.0, nn::Activation::kSigmoid});
  spec.loss = nn::LossKind::kBinaryCrossEntropy;
  spec.optimizer.lr = cfg.lr;
  spec.epochs = cfg.epochs;
  spec.batch_size = cfg.batch_size;
  spec.seed = seed;
  spec.validate();
  return spec;
}

std::size_t main_layer_count(const nn::NetworkSpec& spec) {
  std::size_t n = 0;
  for (const auto& layer : spec.layers) {
    if (std::holds_alternative<nn::Conv1DSpec>(layer) || std::holds_alternative<nn::DenseSpec>(layer)) {
      ++n;
    }
  }
  return n;
}

std::vector<double> cnn_scores_from_outputs(const nn::Tensor& outputs) {
  if (outputs.rank() != 2 || outputs.dim(1) != 2) {
    throw DataError("cnn: expected (n, 2) outputs, got " + nn::shape_to_string(outputs.shape()));
  }
  std::vector<double> scores(outputs.dim(0));
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double neg = outputs[2 * i];
    const double pos = outputs[2 * i + 1];
    const double sum = neg + pos;
    scores[i] = sum == 0.0 ? 0.5 : pos / sum;
  }
  return scores;
}

nn::Tensor sequence_tensor(const Matrix& features) {
  return nn::Tensor({features.rows(), features.cols(), 1}, features.data());
}

std::vector<double> CnnClassifier::predict_scores(const Matrix& features) const {
  if (features.rows() == 0) return {};
  return cnn_scores_from_outputs(network_.predict(sequence_tensor(features)));
}

ClassifierPtr fit_cnn(const Dataset& train, const CnnConfig& cfg, std::uint64_t seed) {
  require_both_classes(train, "cnn");
  const nn::NetworkSpec spec = build_cnn(cfg, train.n_features(), seed);
  nn::Tensor targets({train.n_samples(), 2});
  for (std::size_t i = 0; i < train.n_samples(); ++i) {
    targets[2 * i + static_cast<std::size_t>(train.labels[i])] = 1.0;
  }
  auto trained = nn::fit_network(spec, sequence_tensor(train.features), targets);
  return std::make_unique<CnnClassifier>(std::move(trained.network));
}

}  // namespace cadpipe::models
