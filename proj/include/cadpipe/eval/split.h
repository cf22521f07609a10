#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cadpipe/core/dataset.h"

namespace cadpipe::eval {

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> folds;  // test indices, ascending
  std::uint64_t seed = 0;
  bool stratified = false;

  std::size_t n() const;
  // Every index outside `fold`, ascending.
  std::vector<std::size_t> train_indices(std::size_t fold) const;
  // Throws IntegrityError unless the folds partition 0..n-1.
  void check_partition(std::size_t n) const;
};

// Shuffles 0..n-1 with Prng(seed) and cuts k contiguous chunks; the first
// n % k chunks hold one extra index. Throws ConfigError for k < 2 and
// DataError for k > n.
FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

// Shuffles each class separately (negatives first, one stream), lays the
// classes end to end and deals position j to fold j % k. Fold sizes differ
// by at most one, and so do the per-class counts.
FoldPlan stratified_kfold_split(std::span<const Label> labels, std::size_t k, std::uint64_t seed);

}  // namespace cadpipe::eval
