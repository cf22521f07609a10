#include "cadpipe/ingest/scaler.h"

#include <algorithm>

#include "cadpipe/core/error.h"

namespace cadpipe::ingest {
namespace {

void check_width(const Dataset& ds, const ScalingParams& params) {
  if (params.min.size() != ds.n_features() || params.max.size() != ds.n_features()) {
    throw DataError("scaler has " + std::to_string(params.min.size()) +
                    " features, dataset has " + std::to_string(ds.n_features()));
  }
}

}  // namespace

ScalingParams fit_scaler(const Dataset& ds) {
  if (ds.n_samples() == 0) throw DataError("cannot fit a scaler on an empty dataset");
  ScalingParams p;
  const auto first = ds.features.row(0);
  p.min.assign(first.begin(), first.end());
  p.max.assign(first.begin(), first.end());
  for (std::size_t r = 1; r < ds.n_samples(); ++r) {
    const auto row = ds.features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      p.min[c] = std::min(p.min[c], row[c]);
      p.max[c] = std::max(p.max[c], row[c]);
    }
  }
  return p;
}

Dataset apply_scaler(const Dataset& ds, const ScalingParams& params) {
  check_width(ds, params);
  Dataset out = ds;
  for (std::size_t r = 0; r < out.n_samples(); ++r) {
    auto row = out.features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double span = params.max[c] - params.min[c];
      row[c] = span > 0.0 ? (row[c] - params.min[c]) / span : 0.0;
    }
  }
  return out;
}

Dataset invert_scaler(const Dataset& ds, const ScalingParams& params) {
  check_width(ds, params);
  Dataset out = ds;
  for (std::size_t r = 0; r < out.n_samples(); ++r) {
    auto row = out.features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] = params.min[c] + row[c] * (params.max[c] - params.min[c]);
    }
  }
  return out;
}

}  // namespace cadpipe::ingest
