#include "cadpipe/augment/autoencoder.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "cadpipe/core/error.h"
#include "cadpipe/nn/train.h"

namespace cadpipe::augment {
namespace {

constexpr double kScaledLow = -0.01;
constexpr double kScaledHigh = 1.01;

nn::Tensor to_tensor(const Matrix& m) {
  return nn::Tensor({m.rows(), m.cols()}, m.data());
}

}  // namespace

void AutoencoderSpec::validate() const {
  if (hidden_dim < 1 || hidden_dim > input_dim) {
    throw ConfigError("autoencoder: need input_dim >= hidden_dim >= 1, got input_dim " +
                      std::to_string(input_dim) + ", hidden_dim " + std::to_string(hidden_dim));
  }
  if (epochs == 0 || batch_size == 0) {
    throw ConfigError("autoencoder: epochs and batch_size must be positive");
  }
  if (!(lr > 0.0)) throw ConfigError("autoencoder: lr must be positive");
}

nn::NetworkSpec AutoencoderSpec::network_spec() const {
  validate();
  nn::NetworkSpec spec;
  spec.input_shape = {input_dim};
  spec.layers = {nn::DenseSpec{hidden_dim, 0.0, nn::Activation::kRelu},
                 nn::DenseSpec{input_dim, 0.0, nn::Activation::kSigmoid}};
  spec.loss = nn::LossKind::kMeanSquaredError;
  spec.optimizer.lr = lr;
  spec.epochs = epochs;
  spec.batch_size = batch_size;
  spec.seed = seed;
  return spec;
}

Autoencoder train_autoencoder(const Dataset& ds, const AutoencoderSpec& spec) {
  if (ds.n_features() != spec.input_dim) {
    throw DataError("autoencoder: dataset has " + std::to_string(ds.n_features()) +
                    " features, spec expects " + std::to_string(spec.input_dim));
  }
  for (std::size_t r = 0; r < ds.n_samples(); ++r) {
    for (std::size_t c = 0; c < ds.n_features(); ++c) {
      const double v = ds.features(r, c);
      if (!(v >= kScaledLow && v <= kScaledHigh)) {
        throw DataError("autoencoder: input is not scaled to [0, 1] (row " + std::to_string(r) +
                        ", column '" + ds.feature_names.at(c) + "' = " + std::to_string(v) + ")");
      }
    }
  }
  const nn::Tensor x = to_tensor(ds.features);
  nn::TrainedNetwork trained = nn::fit_network(spec.network_spec(), x, x);
  Autoencoder ae{std::move(trained.network), std::move(trained.loss_history), 0.0};
  ae.final_mse = mean_squared_error(ds.features, reconstruct(ae, ds.features));
  return ae;
}

Matrix reconstruct(const Autoencoder& ae, const Matrix& features) {
  if (features.cols() != ae.input_dim()) {
    throw DataError("reconstruct: expected " + std::to_string(ae.input_dim()) + " columns, got " +
                    std::to_string(features.cols()));
  }
  if (features.rows() == 0) return Matrix(0, features.cols());
  const nn::Tensor out = ae.network.predict(to_tensor(features));
  return Matrix(features.rows(), features.cols(),
                std::vector<double>(out.values().begin(), out.values().end()));
}

std::vector<double> row_errors(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DataError("row_errors: shape mismatch");
  }
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const double d = a(r, c) - b(r, c);
      sum += d * d;
    }
    out[r] = a.cols() == 0 ? 0.0 : sum / static_cast<double>(a.cols());
  }
  return out;
}

double mean_squared_error(const Matrix& a, const Matrix& b) {
  const auto errors = row_errors(a, b);
  if (errors.empty()) return 0.0;
  return std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
}

std::vector<std::size_t> select_reconstructions(std::span<const double> errors,
                                                std::span<const Label> labels,
                                                std::size_t quota) {
  const std::size_t n = labels.size();
  if (errors.size() != n) throw DataError("select_reconstructions: length mismatch");
  if (quota > n) throw DataError("select_reconstructions: quota exceeds row count");

  std::vector<std::size_t> rows[2];
  for (std::size_t i = 0; i < n; ++i) rows[static_cast<int>(labels[i])].push_back(i);

  // Largest remainder apportionment; index 1 is the positive class.
  std::size_t share[2];
  std::size_t remainder[2];
  for (int c = 0; c < 2; ++c) {
    share[c] = quota * rows[c].size() / n;
    remainder[c] = quota * rows[c].size() % n;
  }
  std::size_t left = quota - share[0] - share[1];
  for (int c : {remainder[0] > remainder[1] ? 0 : 1, remainder[0] > remainder[1] ? 1 : 0}) {
    if (left > 0 && share[c] < rows[c].size()) {
      ++share[c];
      --left;
    }
  }

  std::vector<std::size_t> kept;
  for (int c = 0; c < 2; ++c) {
    auto& r = rows[c];
    std::stable_sort(r.begin(), r.end(),
                     [&](std::size_t a, std::size_t b) { return errors[a] > errors[b]; });
    kept.insert(kept.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(share[c]));
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

AugmentedDataset augment(const AugmentedDataset& input, const Autoencoder& ae,
                         std::optional<std::size_t> target_total) {
  input.validate();
  const Dataset& ds = input.dataset;
  const std::size_t n = ds.n_samples();
  if (std::find(input.provenance.begin(), input.provenance.end(), Provenance::kReconstruction) !=
      input.provenance.end()) {
    throw DataError("augment: input already contains reconstructions");
  }
  if (target_total && (*target_total < n || *target_total > 2 * n)) {
    throw DataError("augment: target_total " + std::to_string(*target_total) +
                    " outside [" + std::to_string(n) + ", " + std::to_string(2 * n) + "]");
  }
  const Matrix recon = reconstruct(ae, ds.features);

  std::vector<std::size_t> kept;
  if (target_total) {
    kept = select_reconstructions(row_errors(ds.features, recon), ds.labels, *target_total - n);
  } else {
    kept.resize(n);
    std::iota(kept.begin(), kept.end(), std::size_t{0});
  }

  AugmentedDataset out = input;
  for (std::size_t row : kept) {
    out.dataset.features.append_row(recon.row(row));
    out.dataset.labels.push_back(ds.labels[row]);
    out.provenance.push_back(Provenance::kReconstruction);
  }
  return out;
}

AugmentedDataset augment(const Dataset& ds, const Autoencoder& ae,
                         std::optional<std::size_t> target_total) {
  return augment(AugmentedDataset::from_original(ds), ae, target_total);
}

}  // namespace cadpipe::augment
