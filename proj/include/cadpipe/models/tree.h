#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cadpipe/core/prng.h"
#include "cadpipe/models/classifier.h"

namespace cadpipe::models {

struct TreeConfig {
  std::size_t max_depth = 12;  // 0 grows until leaves are pure
  std::size_t min_samples_split = 2;
  // Features examined per split; 0 means all of them, in column order.
  // With a subset, further features are drawn only if none of the first
  // max_features admits a split.
  std::size_t max_features = 0;

  void validate() const;
};

// 1 - p^2 - (1 - p)^2 with p = positives / total.
double gini(std::size_t positives, std::size_t total);

struct TreeNode {
  // Split nodes send x[feature] <= threshold left. Leaves have feature == -1.
  int feature = -1;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  double score = 0.0;  // positive fraction of the training rows reaching the node

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

class DecisionTree final : public Classifier {
 public:
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  std::string_view name() const override { return "tree"; }
  std::vector<double> predict_scores(const Matrix& features) const override;
  double score(std::span<const double> x) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

// CART on Gini impurity. Thresholds are midpoints between consecutive
// distinct values; the lowest weighted impurity wins, ties going to the
// earlier feature and then the lower threshold. An impure node is split
// whenever some feature varies within it.
DecisionTree grow_tree(const Dataset& train, std::span<const std::size_t> rows,
                       const TreeConfig& cfg, Prng& rng);

ClassifierPtr fit_tree(const Dataset& train, const TreeConfig& cfg, std::uint64_t seed = 0);

// Text format, one node per line in index order (node 0 is the root):
//
//   cadpipe-tree 1
//   nodes <count>
//   split <feature> <threshold> <left> <right> <score>
//   leaf <score>
std::string save_tree(const DecisionTree& tree);
DecisionTree load_tree(std::string_view text);

}  // namespace cadpipe::models
