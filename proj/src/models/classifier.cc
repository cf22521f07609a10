#include "cadpipe/models/classifier.h"

#include <string>

#include "cadpipe/core/error.h"

namespace cadpipe::models {

std::vector<Label> Classifier::predict_labels(const Matrix& features, double threshold) const {
  const auto scores = predict_scores(features);
  std::vector<Label> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(s >= threshold ? Label::kPositive : Label::kNegative);
  return out;
}

void require_both_classes(const Dataset& train, std::string_view model) {
  const ClassCounts c = train.class_counts();
  if (c.positive == 0 || c.negative == 0) {
    throw DataError(std::string(model) + ": training set has a single class (" +
                    std::to_string(c.positive) + " positive, " + std::to_string(c.negative) +
                    " negative)");
  }
}

}  // namespace cadpipe::models
