#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cadpipe/eval/metrics.h"
#include "cadpipe/eval/split.h"
#include "cadpipe/models/classifier.h"

namespace cadpipe::eval {

struct FoldData {
  Dataset train;
  Dataset test;
};

// Builds train/test sets from a plan. Throws DataError naming the first
// fold whose test or training portion holds a single class.
std::vector<FoldData> materialize_folds(const Dataset& ds, const FoldPlan& plan);

struct FoldResult {
  std::size_t fold = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  ConfusionCounts counts;
  Metrics positive;  // CAD class as positive
  Metrics macro;
  double roc_auc = 0.0;
};

struct MetricMeans {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  double roc_auc = 0.0;
};

struct MetricsReport {
  std::string model;
  std::vector<FoldResult> folds;
  MetricMeans mean;        // unweighted mean of the positive-class fold rows
  MetricMeans macro_mean;  // same over the macro-averaged fold rows
};

// Arithmetic means over the fold rows.
void aggregate(MetricsReport& report);

struct EvalOptions {
  std::uint64_t seed = 0;  // fold f trains with seed ^ f
  std::size_t threads = 1;
  double threshold = 0.5;
  // Called from the worker thread as each fold finishes.
  std::function<void(const FoldResult&)> on_fold;
};

// Fits on each fold's training set and scores its test set. Folds run in
// parallel when threads > 1; the report is ordered by fold index.
MetricsReport evaluate_folds(const std::string& model, const models::ModelFactory& factory,
                             std::span<const FoldData> folds, const EvalOptions& options);

MetricsReport evaluate_model(const std::string& model, const models::ModelFactory& factory,
                             const Dataset& ds, const FoldPlan& plan, const EvalOptions& options);

// Scores one fold with an already fitted model.
FoldResult score_fold(const models::Classifier& model, const Dataset& test, std::size_t fold,
                      std::size_t n_train, double threshold = 0.5);

}  // namespace cadpipe::eval
