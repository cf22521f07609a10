#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "cadpipe/core/dataset.h"

namespace cadpipe::models {

// A fitted binary classifier. Scores are positive-class scores in [0, 1].
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string_view name() const = 0;
  virtual std::vector<double> predict_scores(const Matrix& features) const = 0;

  // score >= threshold -> positive.
  std::vector<Label> predict_labels(const Matrix& features, double threshold = 0.5) const;
};

using ClassifierPtr = std::unique_ptr<Classifier>;

// Fits a fresh classifier on a training set.
using ModelFactory = std::function<ClassifierPtr(const Dataset& train, std::uint64_t seed)>;

// Throws DataError naming `model` unless both classes are present.
void require_both_classes(const Dataset& train, std::string_view model);

}  // namespace cadpipe::models
