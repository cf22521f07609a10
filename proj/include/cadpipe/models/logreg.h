#pragma once

#include <cstdint>
#include <vector>

#include "cadpipe/models/classifier.h"

namespace cadpipe::models {

struct LogRegConfig {
  double lr = 0.1;
  std::size_t epochs = 500;
  double l2 = 1e-4;

  void validate() const;
};

// sigmoid(w . x + b).
class LogisticRegression final : public Classifier {
 public:
  LogisticRegression(std::vector<double> weights, double bias)
      : weights_(std::move(weights)), bias_(bias) {}

  std::string_view name() const override { return "logreg"; }
  std::vector<double> predict_scores(const Matrix& features) const override;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  std::vector<double> weights_;
  double bias_;
};

// Full-batch gradient descent on mean binary cross entropy plus
// l2 * |w|^2, starting from zero weights. Deterministic; the seed is unused.
ClassifierPtr fit_logreg(const Dataset& train, const LogRegConfig& cfg, std::uint64_t seed = 0);

}  // namespace cadpipe::models
