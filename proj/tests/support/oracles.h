#pragma once

// Independent reference computations used by the unit and acceptance
// tests. Nothing here shares code with the implementations it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cadpipe::oracle {

// Sort every reference point by (Euclidean distance, index) and take k.
inline std::vector<std::size_t> knn_exhaustive(const std::vector<std::vector<double>>& refs,
                                               const std::vector<double>& point, std::size_t k,
                                               std::optional<std::size_t> exclude) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (exclude && *exclude == i) continue;
    double sq = 0.0;
    for (std::size_t j = 0; j < point.size(); ++j) {
      sq += (refs[i][j] - point[j]) * (refs[i][j] - point[j]);
    }
    all.emplace_back(std::sqrt(sq), i);
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(all[i].second);
  return out;
}

// Enumerate all positive/negative pairs: win = 2, tie = 1, loss = 0,
// normalized by 2 * n_pos * n_neg.
inline double auc_pairwise(const std::vector<double>& scores, const std::vector<int>& positive) {
  std::uint64_t twice_wins = 0;
  std::uint64_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (positive[i]) {
      ++n_pos;
    } else {
      ++n_neg;
    }
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j]) continue;
      if (scores[i] > scores[j]) {
        twice_wins += 2;
      } else if (scores[i] == scores[j]) {
        twice_wins += 1;
      }
    }
  }
  return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(n_pos * n_neg));
}

// Central difference of f along every coordinate of x (x is restored).
inline std::vector<double> central_differences(std::span<double> x,
                                               const std::function<double()>& f,
                                               double h = 1e-5) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = f();
    x[i] = saved - h;
    const double down = f();
    x[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

inline double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

}  // namespace cadpipe::oracle
