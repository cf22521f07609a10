#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cadpipe/core/matrix.h"

namespace cadpipe {

enum class Label : std::uint8_t { kNegative = 0, kPositive = 1 };

inline Label other(Label l) {
  return l == Label::kPositive ? Label::kNegative : Label::kPositive;
}

struct ClassCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;

  std::size_t total() const { return positive + negative; }
  std::size_t of(Label l) const { return l == Label::kPositive ? positive : negative; }
  bool operator==(const ClassCounts&) const = default;
};

// Numeric feature matrix plus binary labels. Every pipeline stage consumes
// and produces one of these.
struct Dataset {
  Matrix features;
  std::vector<Label> labels;
  std::vector<std::string> feature_names;
  std::string label_name = "label";

  std::size_t n_samples() const { return features.rows(); }
  std::size_t n_features() const { return features.cols(); }

  ClassCounts class_counts() const;

  // Rows in the given order; names are kept.
  Dataset subset(std::span<const std::size_t> indices) const;

  // Throws DataError on shape mismatches or non-finite entries.
  void validate() const;

  bool operator==(const Dataset&) const = default;
};

// Where a row came from.
enum class Provenance : std::uint8_t { kOriginal, kSyntheticSmote, kReconstruction };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

struct AugmentedDataset {
  Dataset dataset;
  std::vector<Provenance> provenance;

  // Original rows only, as a provenance-tagged dataset.
  static AugmentedDataset from_original(Dataset ds);

  void validate() const;
  bool operator==(const AugmentedDataset&) const = default;
};

std::vector<double> labels_as_doubles(std::span<const Label> labels);

}  // namespace cadpipe
