#include "cadpipe/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "cadpipe/core/error.h"

namespace cadpipe::eval {
namespace {

double ratio(std::size_t num, std::size_t den, const char* name, Metrics& m) {
  if (den == 0) {
    m.undefined.emplace_back(name);
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionCounts confusion(std::span<const Label> truth, std::span<const Label> predicted) {
  if (truth.size() != predicted.size()) {
    throw DataError("confusion: " + std::to_string(truth.size()) + " labels but " +
                    std::to_string(predicted.size()) + " predictions");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] == Label::kPositive;
    const bool p = predicted[i] == Label::kPositive;
    if (t && p) ++c.tp;
    else if (!t && p) ++c.fp;
    else if (!t && !p) ++c.tn;
    else ++c.fn;
  }
  return c;
}

Metrics metrics(const ConfusionCounts& c) {
  Metrics m;
  m.recall = ratio(c.tp, c.tp + c.fn, "recall", m);
  m.precision = ratio(c.tp, c.tp + c.fp, "precision", m);
  m.accuracy = ratio(c.tp + c.tn, c.total(), "accuracy", m);
  const double sum = m.precision + m.recall;
  if (sum == 0.0) {
    m.undefined.emplace_back("f1");
    m.f1 = 0.0;
  } else {
    m.f1 = 2.0 * m.precision * m.recall / sum;
  }
  return m;
}

Metrics macro_metrics(const ConfusionCounts& c) {
  const Metrics pos = metrics(c);
  const Metrics neg = metrics(c.swapped());
  Metrics m;
  m.recall = (pos.recall + neg.recall) / 2.0;
  m.precision = (pos.precision + neg.precision) / 2.0;
  m.f1 = (pos.f1 + neg.f1) / 2.0;
  m.accuracy = pos.accuracy;
  for (const auto& u : pos.undefined) m.undefined.push_back(u);
  for (const auto& u : neg.undefined) m.undefined.push_back("negative " + u);
  return m;
}

double roc_auc(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) throw DataError("roc_auc: length mismatch");
  std::uint64_t n_pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw DataError("roc_auc: NaN score at " + std::to_string(i));
    n_pos += labels[i] == Label::kPositive;
  }
  const std::uint64_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw DataError("roc_auc: both classes must be present");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the positive rank sum, using midranks for ties: a group occupying
  // 0-based positions i..i+g-1 has rank (2i + g + 1) / 2.
  std::uint64_t twice_rank_sum = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::uint64_t group_pos = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      group_pos += labels[order[j]] == Label::kPositive;
      ++j;
    }
    twice_rank_sum += group_pos * (2 * i + (j - i) + 1);
    i = j;
  }
  const std::uint64_t twice_u = twice_rank_sum - n_pos * (n_pos + 1);
  return static_cast<double>(twice_u) / static_cast<double>(2 * n_pos * n_neg);
}

}  // namespace cadpipe::eval
