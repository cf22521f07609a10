#include "cadpipe/eval/split.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "cadpipe/core/error.h"
#include "cadpipe/core/prng.h"

namespace cadpipe::eval {
namespace {

void check_k(std::size_t n, std::size_t k) {
  if (k < 2) throw ConfigError("k-fold: k must be at least 2, got " + std::to_string(k));
  if (k > n) {
    throw DataError("k-fold: k = " + std::to_string(k) + " exceeds " + std::to_string(n) + " samples");
  }
}

}  // namespace

std::size_t FoldPlan::n() const {
  std::size_t total = 0;
  for (const auto& f : folds) total += f.size();
  return total;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f != fold) out.insert(out.end(), folds[f].begin(), folds[f].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void FoldPlan::check_partition(std::size_t n) const {
  if (folds.size() != k) throw IntegrityError("fold plan: expected " + std::to_string(k) + " folds");
  std::vector<int> seen(n, 0);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    for (std::size_t i : folds[f]) {
      if (i >= n) throw IntegrityError("fold plan: index " + std::to_string(i) + " out of range");
      if (seen[i]++) throw IntegrityError("fold plan: index " + std::to_string(i) + " repeated");
    }
  }
  const auto missing = std::find(seen.begin(), seen.end(), 0);
  if (missing != seen.end()) {
    throw IntegrityError("fold plan: index " + std::to_string(missing - seen.begin()) +
                         " is in no fold");
  }
}

FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
  check_k(n, k);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Prng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  FoldPlan plan{k, {}, seed, false};
  std::size_t start = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    std::vector<std::size_t> fold(order.begin() + static_cast<std::ptrdiff_t>(start),
                                  order.begin() + static_cast<std::ptrdiff_t>(start + size));
    std::sort(fold.begin(), fold.end());
    plan.folds.push_back(std::move(fold));
    start += size;
  }
  return plan;
}

FoldPlan stratified_kfold_split(std::span<const Label> labels, std::size_t k, std::uint64_t seed) {
  check_k(labels.size(), k);
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[static_cast<int>(labels[i])].push_back(i);
  Prng rng(seed);
  std::vector<std::size_t> order;
  for (auto& rows : by_class) {
    rng.shuffle(std::span<std::size_t>(rows));
    order.insert(order.end(), rows.begin(), rows.end());
  }
  FoldPlan plan{k, std::vector<std::vector<std::size_t>>(k), seed, true};
  for (std::size_t j = 0; j < order.size(); ++j) plan.folds[j % k].push_back(order[j]);
  for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
  return plan;
}

}  // namespace cadpipe::eval
