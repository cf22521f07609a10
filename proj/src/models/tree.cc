#include "cadpipe/models/tree.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "cadpipe/core/dataset_io.h"
#include "cadpipe/core/error.h"

namespace cadpipe::models {
namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

class Grower {
 public:
  Grower(const Dataset& ds, const TreeConfig& cfg, Prng& rng) : ds_(ds), cfg_(cfg), rng_(rng) {}

  std::vector<TreeNode> run(std::vector<std::size_t> rows) {
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  std::size_t grow(std::vector<std::size_t>& rows, std::size_t depth) {
    const std::size_t m = rows.size();
    std::size_t positives = 0;
    for (std::size_t r : rows) positives += ds_.labels[r] == Label::kPositive;

    const std::size_t id = nodes_.size();
    nodes_.push_back(TreeNode{});
    nodes_[id].score = static_cast<double>(positives) / static_cast<double>(m);

    const bool pure = positives == 0 || positives == m;
    const bool capped = cfg_.max_depth > 0 && depth >= cfg_.max_depth;
    if (pure || capped || m < cfg_.min_samples_split) return id;
    const Split split = best_split(rows, positives);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t r : rows) {
      (ds_.features(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right)
          .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    nodes_[id].feature = split.feature;
    nodes_[id].threshold = split.threshold;
    const std::size_t l = grow(left, depth + 1);
    const std::size_t r = grow(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  Split best_split(const std::vector<std::size_t>& rows, std::size_t positives) {
    const std::size_t d = ds_.n_features();
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t budget = d;
    if (cfg_.max_features > 0 && cfg_.max_features < d) {
      rng_.shuffle(std::span<std::size_t>(order));
      budget = cfg_.max_features;
    }
    Split best;
    for (std::size_t i = 0; i < d; ++i) {
      if (i >= budget && best.feature >= 0) break;
      consider(order[i], rows, positives, best);
    }
    return best;
  }

  // Updates `best` if feature f has a strictly better split.
  void consider(std::size_t f, const std::vector<std::size_t>& rows, std::size_t positives,
                Split& best) {
    const std::size_t m = rows.size();
    values_.clear();
    for (std::size_t r : rows) values_.emplace_back(ds_.features(r, f), ds_.labels[r] == Label::kPositive);
    std::sort(values_.begin(), values_.end());
    std::size_t left_pos = 0;
    Split local;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      left_pos += values_[i].second;
      const double lo = values_[i].first;
      const double hi = values_[i + 1].first;
      if (!(lo < hi)) continue;
      const std::size_t nl = i + 1;
      const std::size_t nr = m - nl;
      const double impurity = (static_cast<double>(nl) * gini(left_pos, nl) +
                               static_cast<double>(nr) * gini(positives - left_pos, nr)) /
                              static_cast<double>(m);
      if (local.feature < 0 || impurity < local.impurity) {
        double mid = lo + (hi - lo) / 2.0;
        if (!(mid < hi)) mid = lo;
        local = Split{static_cast<int>(f), mid, impurity};
      }
    }
    if (local.feature < 0) return;
    const bool better = best.feature < 0 || local.impurity < best.impurity ||
                        (local.impurity == best.impurity && local.feature < best.feature);
    if (better) best = local;
  }

  const Dataset& ds_;
  const TreeConfig& cfg_;
  Prng& rng_;
  std::vector<TreeNode> nodes_;
  std::vector<std::pair<double, bool>> values_;
};

std::size_t depth_below(const std::vector<TreeNode>& nodes, std::size_t id) {
  const TreeNode& n = nodes[id];
  if (n.is_leaf()) return 0;
  return 1 + std::max(depth_below(nodes, n.left), depth_below(nodes, n.right));
}

}  // namespace

void TreeConfig::validate() const {
  if (min_samples_split < 2) throw ConfigError("tree: min_samples_split must be at least 2");
}

double gini(std::size_t positives, std::size_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(positives) / static_cast<double>(total);
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

double DecisionTree::score(std::span<const double> x) const {
  std::size_t id = 0;
  while (!nodes_[id].is_leaf()) {
    const TreeNode& n = nodes_[id];
    id = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes_[id].score;
}

std::vector<double> DecisionTree::predict_scores(const Matrix& features) const {
  std::vector<double> out(features.rows());
  for (std::size_t r = 0; r < features.rows(); ++r) out[r] = score(features.row(r));
  return out;
}

std::size_t DecisionTree::depth() const { return nodes_.empty() ? 0 : depth_below(nodes_, 0); }

DecisionTree grow_tree(const Dataset& train, std::span<const std::size_t> rows,
                       const TreeConfig& cfg, Prng& rng) {
  cfg.validate();
  if (rows.empty()) throw DataError("tree: no training rows");
  Grower grower(train, cfg, rng);
  return DecisionTree(grower.run({rows.begin(), rows.end()}));
}

ClassifierPtr fit_tree(const Dataset& train, const TreeConfig& cfg, std::uint64_t seed) {
  require_both_classes(train, "tree");
  std::vector<std::size_t> rows(train.n_samples());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Prng rng(seed);
  return std::make_unique<DecisionTree>(grow_tree(train, rows, cfg, rng));
}

std::string save_tree(const DecisionTree& tree) {
  std::string out = "cadpipe-tree 1\nnodes " + std::to_string(tree.nodes().size()) + "\n";
  for (const TreeNode& n : tree.nodes()) {
    if (n.is_leaf()) {
      out += "leaf " + format_double(n.score) + "\n";
    } else {
      out += "split " + std::to_string(n.feature) + " " + format_double(n.threshold) + " " +
             std::to_string(n.left) + " " + std::to_string(n.right) + " " +
             format_double(n.score) + "\n";
    }
  }
  return out;
}

DecisionTree load_tree(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto fail = [](const std::string& why) -> DecisionTree { throw ParseError("tree file: " + why); };
  if (!std::getline(in, line) || line != "cadpipe-tree 1") return fail("bad magic line");
  std::string word;
  std::size_t count = 0;
  if (!(in >> word >> count) || word != "nodes" || count == 0) return fail("bad node count");
  std::vector<TreeNode> nodes(count);
  for (std::size_t i = 0; i < count; ++i) {
    TreeNode& n = nodes[i];
    if (!(in >> word)) return fail("truncated at node " + std::to_string(i));
    if (word == "leaf") {
      if (!(in >> n.score)) return fail("bad leaf at node " + std::to_string(i));
    } else if (word == "split") {
      if (!(in >> n.feature >> n.threshold >> n.left >> n.right >> n.score) || n.feature < 0 ||
          n.left >= count || n.right >= count || n.left <= i || n.right <= i) {
        return fail("bad split at node " + std::to_string(i));
      }
    } else {
      return fail("unknown node kind '" + word + "'");
    }
  }
  if (in >> word) return fail("trailing content");
  return DecisionTree(std::move(nodes));
}

}  // namespace cadpipe::models
