#pragma once

#include <span>
#include <string>
#include <vector>

#include "cadpipe/core/dataset.h"

namespace cadpipe::eval {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  // The same counts with the negative class treated as positive.
  ConfusionCounts swapped() const { return {tn, fn, tp, fp}; }
  bool operator==(const ConfusionCounts&) const = default;
};

// Throws DataError on a length mismatch.
ConfusionCounts confusion(std::span<const Label> truth, std::span<const Label> predicted);

struct Metrics {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  // Names of ratios that were 0/0 and therefore reported as 0.
  std::vector<std::string> undefined;
};

// recall = tp/(tp+fn), precision = tp/(tp+fp), accuracy = (tp+tn)/total,
// f1 = 2PR/(P+R).
Metrics metrics(const ConfusionCounts& c);

// Unweighted mean over the two classes of recall, precision and f1;
// accuracy is unchanged.
Metrics macro_metrics(const ConfusionCounts& c);

// Mann-Whitney AUC from midranks: the fraction of (positive, negative)
// pairs the positive wins, ties counting one half. Computed from an exact
// integer pair count. Throws DataError unless both classes are present or
// if any score is NaN.
double roc_auc(std::span<const double> scores, std::span<const Label> labels);

}  // namespace cadpipe::eval
