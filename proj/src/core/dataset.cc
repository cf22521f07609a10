#include "cadpipe/core/dataset.h"

#include <algorithm>
#include <cmath>

#include "cadpipe/core/error.h"

namespace cadpipe {

ClassCounts Dataset::class_counts() const {
  ClassCounts c;
  for (Label l : labels) {
    if (l == Label::kPositive) {
      ++c.positive;
    } else {
      ++c.negative;
    }
  }
  return c;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.features = features.select_rows(indices);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.labels.push_back(labels[i]);
  out.feature_names = feature_names;
  out.label_name = label_name;
  return out;
}

void Dataset::validate() const {
  if (labels.size() != features.rows()) {
    throw DataError("dataset has " + std::to_string(features.rows()) + " rows but " +
                    std::to_string(labels.size()) + " labels");
  }
  if (feature_names.size() != features.cols()) {
    throw DataError("dataset has " + std::to_string(features.cols()) + " columns but " +
                    std::to_string(feature_names.size()) + " feature names");
  }
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < features.cols(); ++c) {
      if (!std::isfinite(features(r, c))) {
        throw DataError("non-finite value at row " + std::to_string(r) + ", column '" +
                        feature_names[c] + "'");
      }
    }
  }
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kOriginal:
      return "original";
    case Provenance::kSyntheticSmote:
      return "synthetic_smote";
    case Provenance::kReconstruction:
      return "reconstruction";
  }
  return "unknown";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "original") return Provenance::kOriginal;
  if (s == "synthetic_smote") return Provenance::kSyntheticSmote;
  if (s == "reconstruction") return Provenance::kReconstruction;
  throw ParseError("unknown provenance tag '" + std::string(s) + "'");
}

AugmentedDataset AugmentedDataset::from_original(Dataset ds) {
  AugmentedDataset out;
  out.provenance.assign(ds.n_samples(), Provenance::kOriginal);
  out.dataset = std::move(ds);
  return out;
}

void AugmentedDataset::validate() const {
  dataset.validate();
  if (provenance.size() != dataset.n_samples()) {
    throw DataError("provenance length " + std::to_string(provenance.size()) +
                    " does not match " + std::to_string(dataset.n_samples()) + " rows");
  }
  const auto first = std::find(provenance.begin(), provenance.end(), Provenance::kReconstruction);
  if (std::any_of(first, provenance.end(),
                  [](Provenance p) { return p != Provenance::kReconstruction; })) {
    throw DataError("reconstruction rows must follow every other row");
  }
}

std::vector<double> labels_as_doubles(std::span<const Label> labels) {
  std::vector<double> out;
  out.reserve(labels.size());
  for (Label l : labels) out.push_back(l == Label::kPositive ? 1.0 : 0.0);
  return out;
}

}  // namespace cadpipe
