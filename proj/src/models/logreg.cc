#include "cadpipe/models/logreg.h"

#include <cmath>
#include <string>

#include "cadpipe/core/error.h"

namespace cadpipe::models {
namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

void LogRegConfig::validate() const {
  if (!(lr > 0.0)) throw ConfigError("logreg: lr must be positive");
  if (epochs == 0) throw ConfigError("logreg: epochs must be positive");
  if (l2 < 0.0) throw ConfigError("logreg: l2 must be non-negative");
}

std::vector<double> LogisticRegression::predict_scores(const Matrix& features) const {
  if (features.rows() > 0 && features.cols() != weights_.size()) {
    throw DataError("logreg: expected " + std::to_string(weights_.size()) + " features, got " +
                    std::to_string(features.cols()));
  }
  std::vector<double> out(features.rows());
  for (std::size_t r = 0; r < features.rows(); ++r) {
    double z = bias_;
    const auto x = features.row(r);
    for (std::size_t c = 0; c < x.size(); ++c) z += weights_[c] * x[c];
    out[r] = sigmoid(z);
  }
  return out;
}

ClassifierPtr fit_logreg(const Dataset& train, const LogRegConfig& cfg, std::uint64_t) {
  cfg.validate();
  require_both_classes(train, "logreg");
  const std::size_t n = train.n_samples();
  const std::size_t d = train.n_features();
  const auto y = labels_as_doubles(train.labels);
  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<double> gw(d);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::fill(gw.begin(), gw.end(), 0.0);
    double gb = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const auto x = train.features.row(r);
      double z = b;
      for (std::size_t c = 0; c < d; ++c) z += w[c] * x[c];
      const double err = sigmoid(z) - y[r];
      for (std::size_t c = 0; c < d; ++c) gw[c] += err * x[c];
      gb += err;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t c = 0; c < d; ++c) w[c] -= cfg.lr * (gw[c] * inv_n + 2.0 * cfg.l2 * w[c]);
    b -= cfg.lr * gb * inv_n;
  }
  return std::make_unique<LogisticRegression>(std::move(w), b);
}

}  // namespace cadpipe::models
