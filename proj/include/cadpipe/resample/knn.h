#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cadpipe/core/matrix.h"

namespace cadpipe::resample {

// Brute-force Euclidean neighbor search over a fixed set of reference rows.
class NeighborIndex {
 public:
  // Throws DataError if any entry is non-finite.
  explicit NeighborIndex(Matrix reference);

  std::size_t size() const { return reference_.rows(); }
  std::size_t dim() const { return reference_.cols(); }
  const Matrix& reference() const { return reference_; }

 private:
  Matrix reference_;
};

// The k reference rows closest to `point`, ascending by distance, ties
// broken by ascending index. `exclude` removes one reference row (the query
// row itself) from consideration. Throws DataError when k is larger than
// the candidate count or the dimensions disagree.
std::vector<std::size_t> knn_query(const NeighborIndex& index, std::span<const double> point,
                                   std::size_t k,
                                   std::optional<std::size_t> exclude = std::nullopt);

double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace cadpipe::resample
