#include "cadpipe/eval/evaluate.h"

#include "cadpipe/core/error.h"
#include "cadpipe/core/parallel.h"

namespace cadpipe::eval {
namespace {

void require_both(const Dataset& ds, std::size_t fold, const char* part) {
  const ClassCounts c = ds.class_counts();
  if (c.positive == 0 || c.negative == 0) {
    throw DataError("fold " + std::to_string(fold) + ": " + part + " set has a single class (" +
                    std::to_string(c.positive) + " positive, " + std::to_string(c.negative) +
                    " negative)");
  }
}

void add(MetricMeans& m, const Metrics& x, double auc) {
  m.recall += x.recall;
  m.precision += x.precision;
  m.f1 += x.f1;
  m.accuracy += x.accuracy;
  m.roc_auc += auc;
}

void divide(MetricMeans& m, double n) {
  m.recall /= n;
  m.precision /= n;
  m.f1 /= n;
  m.accuracy /= n;
  m.roc_auc /= n;
}

}  // namespace

std::vector<FoldData> materialize_folds(const Dataset& ds, const FoldPlan& plan) {
  plan.check_partition(ds.n_samples());
  std::vector<FoldData> out;
  for (std::size_t f = 0; f < plan.k; ++f) {
    FoldData data{ds.subset(plan.train_indices(f)), ds.subset(plan.folds[f])};
    require_both(data.test, f, "test");
    require_both(data.train, f, "training");
    out.push_back(std::move(data));
  }
  return out;
}

void aggregate(MetricsReport& report) {
  report.mean = {};
  report.macro_mean = {};
  for (const FoldResult& f : report.folds) {
    add(report.mean, f.positive, f.roc_auc);
    add(report.macro_mean, f.macro, f.roc_auc);
  }
  if (report.folds.empty()) return;
  divide(report.mean, static_cast<double>(report.folds.size()));
  divide(report.macro_mean, static_cast<double>(report.folds.size()));
}

FoldResult score_fold(const models::Classifier& model, const Dataset& test, std::size_t fold,
                      std::size_t n_train, double threshold) {
  const auto scores = model.predict_scores(test.features);
  std::vector<Label> predicted;
  predicted.reserve(scores.size());
  for (double s : scores) predicted.push_back(s >= threshold ? Label::kPositive : Label::kNegative);
  FoldResult r;
  r.fold = fold;
  r.n_train = n_train;
  r.n_test = test.n_samples();
  r.counts = confusion(test.labels, predicted);
  r.positive = metrics(r.counts);
  r.macro = macro_metrics(r.counts);
  r.roc_auc = roc_auc(scores, test.labels);
  return r;
}

MetricsReport evaluate_folds(const std::string& model, const models::ModelFactory& factory,
                             std::span<const FoldData> folds, const EvalOptions& options) {
  for (std::size_t f = 0; f < folds.size(); ++f) {
    require_both(folds[f].test, f, "test");
    require_both(folds[f].train, f, "training");
  }
  MetricsReport report;
  report.model = model;
  report.folds.resize(folds.size());
  parallel_for(folds.size(), options.threads, [&](std::size_t f) {
    const auto fitted = factory(folds[f].train, options.seed ^ static_cast<std::uint64_t>(f));
    report.folds[f] = score_fold(*fitted, folds[f].test, f, folds[f].train.n_samples(), options.threshold);
    if (options.on_fold) options.on_fold(report.folds[f]);
  });
  aggregate(report);
  return report;
}

MetricsReport evaluate_model(const std::string& model, const models::ModelFactory& factory,
                             const Dataset& ds, const FoldPlan& plan, const EvalOptions& options) {
  const auto folds = materialize_folds(ds, plan);
  return evaluate_folds(model, factory, folds, options);
}

}  // namespace cadpipe::eval
