#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cadpipe/models/tree.h"

namespace cadpipe::models {

struct ForestConfig {
  std::size_t n_trees = 100;
  std::size_t max_features = 0;  // 0 means floor(sqrt(d)), at least 1
  bool bootstrap = true;
  std::size_t max_depth = 12;
  std::size_t min_samples_split = 2;

  void validate() const;
  TreeConfig tree_config(std::size_t n_features) const;
};

class RandomForest final : public Classifier {
 public:
  explicit RandomForest(std::vector<DecisionTree> trees) : trees_(std::move(trees)) {}

  std::string_view name() const override { return "forest"; }
  // Mean of the tree scores.
  std::vector<double> predict_scores(const Matrix& features) const override;

  const std::vector<DecisionTree>& trees() const { return trees_; }

 private:
  std::vector<DecisionTree> trees_;
};

// Tree t draws its bootstrap sample and split features from
// Prng(seed).derive(t), so the ensemble does not depend on fitting order.
ClassifierPtr fit_forest(const Dataset& train, const ForestConfig& cfg, std::uint64_t seed);

// "cadpipe-forest 1", "trees <count>", then each tree in the tree format.
std::string save_forest(const RandomForest& forest);

}  // namespace cadpipe::models
