#pragma once

#include <vector>

#include "cadpipe/core/dataset.h"

namespace cadpipe::ingest {

// Per-feature min-max bounds.
struct ScalingParams {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t size() const { return min.size(); }
  bool operator==(const ScalingParams&) const = default;
};

ScalingParams fit_scaler(const Dataset& ds);

// x -> (x - min) / (max - min); a feature with min == max maps to 0.
// Throws DataError when the parameter count differs from n_features.
Dataset apply_scaler(const Dataset& ds, const ScalingParams& params);

// Inverse of apply_scaler for features with min < max.
Dataset invert_scaler(const Dataset& ds, const ScalingParams& params);

}  // namespace cadpipe::ingest
