#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cadpipe/core/dataset.h"

namespace cadpipe::resample {

struct SmoteConfig {
  std::size_t m_neighbors = 5;  // neighborhood used to find the danger set
  std::size_t k_neighbors = 5;  // minority neighbors used for interpolation
  std::uint64_t seed = 0;
  // Columns whose synthetic values are snapped to the nearest value observed
  // in that column, for binary and ordinal features. Empty by default.
  std::vector<std::size_t> snap_columns;

  void validate() const;
};

// Minority rows split by how many of their m nearest neighbors (over the
// whole dataset) belong to the majority class. Positions index into
// `minority_rows`, which lists dataset row indices in ascending order.
struct MinorityPartition {
  Label minority = Label::kNegative;
  std::vector<std::size_t> minority_rows;
  std::vector<std::size_t> safe;
  std::vector<std::size_t> danger;
  std::vector<std::size_t> noise;
};

// One synthetic row: p + r * (q - p), with p and q dataset row indices.
struct SynthesisRecord {
  std::size_t p_row = 0;
  std::size_t q_row = 0;
  double r = 0.0;
};

struct SmoteResult {
  // Originals in input order followed by synthetic minority rows.
  Dataset dataset;
  std::size_t n_original = 0;
  MinorityPartition partition;
  std::vector<SynthesisRecord> synthesis;
  std::vector<std::string> warnings;
};

// out = p + r * (q - p), elementwise.
void interpolate(std::span<const double> p, std::span<const double> q, double r,
                 std::span<double> out);

// Label with fewer samples; ties report negative.
Label minority_label(const Dataset& ds);

// Throws DataError when a class is empty or m_neighbors >= n_samples.
MinorityPartition partition_minority(const Dataset& ds, const SmoteConfig& cfg);

// Borderline-SMOTE (variant 1) up to equal class counts. The deficit is
// dealt round-robin over the danger set in index order; each synthesis
// draws its partner uniformly from the seed's k nearest minority neighbors
// (uniform_index(k), then uniform() for r, from one stream seeded with
// cfg.seed). With an empty danger set every minority row is a seed and a
// warning is recorded. k is clamped to minority size - 1.
//
// Throws DataError if the minority class has fewer than 2 samples.
SmoteResult borderline_smote_traced(const Dataset& ds, const SmoteConfig& cfg);

Dataset borderline_smote(const Dataset& ds, const SmoteConfig& cfg);

}  // namespace cadpipe::resample
