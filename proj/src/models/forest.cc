#include "cadpipe/models/forest.h"

#include <cmath>
#include <numeric>

#include "cadpipe/core/error.h"

namespace cadpipe::models {

void ForestConfig::validate() const {
  if (n_trees == 0) throw ConfigError("forest: n_trees must be positive");
  tree_config(1).validate();
}

TreeConfig ForestConfig::tree_config(std::size_t n_features) const {
  TreeConfig t;
  t.max_depth = max_depth;
  t.min_samples_split = min_samples_split;
  t.max_features = max_features;
  if (t.max_features == 0) {
    t.max_features = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_features)))));
  }
  return t;
}

std::vector<double> RandomForest::predict_scores(const Matrix& features) const {
  std::vector<double> out(features.rows(), 0.0);
  for (const DecisionTree& tree : trees_) {
    for (std::size_t r = 0; r < features.rows(); ++r) out[r] += tree.score(features.row(r));
  }
  for (double& v : out) v /= static_cast<double>(trees_.size());
  return out;
}

ClassifierPtr fit_forest(const Dataset& train, const ForestConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  require_both_classes(train, "forest");
  const std::size_t n = train.n_samples();
  const TreeConfig tree_cfg = cfg.tree_config(train.n_features());
  const Prng root(seed);
  std::vector<DecisionTree> trees;
  trees.reserve(cfg.n_trees);
  std::vector<std::size_t> rows(n);
  for (std::size_t t = 0; t < cfg.n_trees; ++t) {
    Prng rng = root.derive(t);
    if (cfg.bootstrap) {
      for (std::size_t& r : rows) r = rng.uniform_index(n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    trees.push_back(grow_tree(train, rows, tree_cfg, rng));
  }
  return std::make_unique<RandomForest>(std::move(trees));
}

std::string save_forest(const RandomForest& forest) {
  std::string out = "cadpipe-forest 1\ntrees " + std::to_string(forest.trees().size()) + "\n";
  for (const DecisionTree& tree : forest.trees()) out += save_tree(tree);
  return out;
}

}  // namespace cadpipe::models
