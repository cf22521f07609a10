#include "cadpipe/resample/knn.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cadpipe/core/error.h"

namespace cadpipe::resample {

NeighborIndex::NeighborIndex(Matrix reference) : reference_(std::move(reference)) {
  for (double v : reference_.data()) {
    if (!std::isfinite(v)) throw DataError("neighbor index: non-finite reference entry");
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

std::vector<std::size_t> knn_query(const NeighborIndex& index, std::span<const double> point,
                                   std::size_t k, std::optional<std::size_t> exclude) {
  if (point.size() != index.dim()) {
    throw DataError("knn: query has dimension " + std::to_string(point.size()) +
                    ", index has " + std::to_string(index.dim()));
  }
  const bool skip = exclude.has_value() && *exclude < index.size();
  const std::size_t candidates = index.size() - (skip ? 1 : 0);
  if (k > candidates) {
    throw DataError("knn: k = " + std::to_string(k) + " exceeds " +
                    std::to_string(candidates) + " candidate points");
  }

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(candidates);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (skip && i == *exclude) continue;
    scored.emplace_back(squared_distance(point, index.reference().row(i)), i);
  }
  // pair ordering gives (distance, index) lexicographic order.
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                    scored.end());
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace cadpipe::resample
