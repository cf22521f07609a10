#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <numeric>

#include "cadpipe/core/error.h"
#include "cadpipe/core/prng.h"
#include "cadpipe/eval/report.h"
#include "cadpipe/models/logreg.h"
#include "oracles.h"

namespace cadpipe::eval {
namespace {

constexpr Label P = Label::kPositive;
constexpr Label N = Label::kNegative;

std::vector<std::size_t> sizes(const FoldPlan& plan) {
  std::vector<std::size_t> out;
  for (const auto& f : plan.folds) out.push_back(f.size());
  return out;
}

TEST(KFold, TenSingletons) {
  const FoldPlan plan = kfold_split(10, 10, 1);
  EXPECT_EQ(sizes(plan), std::vector<std::size_t>(10, 1));
  EXPECT_NO_THROW(plan.check_partition(10));
}

TEST(KFold, EightHundredTwentySix) {
  const FoldPlan plan = kfold_split(826, 10, 7);
  std::vector<std::size_t> expected(6, 83);
  expected.insert(expected.end(), 4, 82);
  EXPECT_EQ(sizes(plan), expected);
  plan.check_partition(826);

  std::vector<Label> labels(826, N);
  std::fill(labels.begin(), labels.begin() + 413, P);
  const FoldPlan strat = stratified_kfold_split(labels, 10, 7);
  EXPECT_EQ(sizes(strat), expected);
  strat.check_partition(826);
}

TEST(KFold, Deterministic) {
  EXPECT_EQ(kfold_split(100, 7, 3).folds, kfold_split(100, 7, 3).folds);
  EXPECT_NE(kfold_split(100, 7, 3).folds, kfold_split(100, 7, 4).folds);
}

TEST(KFold, Errors) {
  EXPECT_THROW(kfold_split(5, 6, 0), DataError);
  EXPECT_THROW(kfold_split(5, 1, 0), ConfigError);
  FoldPlan bad{2, {{0, 1}, {1}}, 0, false};
  EXPECT_THROW(bad.check_partition(3), IntegrityError);
  bad.folds = {{0}, {1}};
  EXPECT_THROW(bad.check_partition(3), IntegrityError);
}

TEST(KFold, PartitionAndBalanceProperty) {
  Prng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(400);
    const std::size_t k = 2 + rng.uniform_index(std::min<std::size_t>(n - 1, 15));
    std::vector<Label> labels(n);
    for (auto& l : labels) l = rng.bernoulli(0.4) ? P : N;
    for (const FoldPlan& plan :
         {kfold_split(n, k, trial), stratified_kfold_split(labels, k, trial)}) {
      ASSERT_NO_THROW(plan.check_partition(n));
      const auto s = sizes(plan);
      ASSERT_LE(*std::max_element(s.begin(), s.end()) - *std::min_element(s.begin(), s.end()), 1u);
      for (const auto& fold : plan.folds) ASSERT_TRUE(std::is_sorted(fold.begin(), fold.end()));
      const auto train = plan.train_indices(0);
      ASSERT_EQ(train.size() + plan.folds[0].size(), n);
    }
    const FoldPlan strat = stratified_kfold_split(labels, k, trial);
    std::vector<std::size_t> pos_per_fold;
    for (const auto& fold : strat.folds) {
      pos_per_fold.push_back(std::count_if(fold.begin(), fold.end(), [&](std::size_t i) { return labels[i] == P; }));
    }
    ASSERT_LE(*std::max_element(pos_per_fold.begin(), pos_per_fold.end()) -
                  *std::min_element(pos_per_fold.begin(), pos_per_fold.end()),
              1u);
  }
}

TEST(Confusion, HandExample) {
  // tp=3, fp=1, fn=2, tn=4
  const std::vector<Label> truth{P, P, P, N, P, P, N, N, N, N};
  const std::vector<Label> pred{P, P, P, P, N, N, N, N, N, N};
  const ConfusionCounts c = confusion(truth, pred);
  EXPECT_EQ(c, (ConfusionCounts{3, 1, 4, 2}));
  const Metrics m = metrics(c);
  EXPECT_DOUBLE_EQ(m.precision, 0.75);
  EXPECT_DOUBLE_EQ(m.recall, 0.6);
  EXPECT_NEAR(m.f1, 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.7);
  EXPECT_TRUE(m.undefined.empty());
}

TEST(Confusion, PerfectClassifier) {
  const std::vector<Label> truth{P, N, P, N};
  const Metrics m = metrics(confusion(truth, truth));
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.f1, 1.0);
  EXPECT_EQ(m.accuracy, 1.0);
}

TEST(Confusion, ZeroOverZeroIsFlagged) {
  const std::vector<Label> truth{N, N, N};
  const Metrics m = metrics(confusion(truth, truth));
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.undefined, (std::vector<std::string>{"recall", "precision", "f1"}));
  EXPECT_THROW(confusion(truth, std::vector<Label>{N}), DataError);
}

TEST(Confusion, MacroAveragesBothClasses) {
  const Metrics m = macro_metrics({3, 1, 4, 2});
  // negative class: tp=4, fp=2, fn=1 -> precision 2/3, recall 0.8
  EXPECT_NEAR(m.precision, (0.75 + 4.0 / 6.0) / 2.0, 1e-12);
  EXPECT_NEAR(m.recall, (0.6 + 0.8) / 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.7);
}

TEST(RocAuc, Examples) {
  EXPECT_EQ(roc_auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<Label>{N, N, P, P}), 0.75);
  EXPECT_EQ(roc_auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<Label>{N, N, P, P}), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>{0.3, 0.3, 0.3}, std::vector<Label>{N, P, P}), 0.5);
  EXPECT_THROW(roc_auc(std::vector<double>{0.3, 0.4}, std::vector<Label>{P, P}), DataError);
  EXPECT_THROW(roc_auc(std::vector<double>{0.3, std::nan("")}, std::vector<Label>{N, P}), DataError);
}

TEST(RocAuc, EqualsPairwiseOracle) {
  Prng rng(2718);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(499);
    std::vector<double> scores(n);
    std::vector<Label> labels(n);
    std::vector<int> positive(n);
    // Coarse grids force plenty of ties.
    const std::size_t levels = 1 + rng.uniform_index(trial % 2 ? 5 : 1000);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng.uniform_index(levels)) / static_cast<double>(levels);
      positive[i] = rng.bernoulli(0.5);
      labels[i] = positive[i] ? P : N;
    }
    labels[0] = P;
    positive[0] = 1;
    labels[1] = N;
    positive[1] = 0;
    ASSERT_EQ(roc_auc(scores, labels), oracle::auc_pairwise(scores, positive)) << "trial " << trial;
  }
}

TEST(RocAuc, PermutationInvariant) {
  Prng rng(5);
  std::vector<double> scores(60);
  std::vector<Label> labels(60);
  for (std::size_t i = 0; i < 60; ++i) {
    scores[i] = rng.uniform();
    labels[i] = i % 3 ? P : N;
  }
  const double auc = roc_auc(scores, labels);
  const ConfusionCounts c = confusion(labels, std::vector<Label>(60, P));
  for (int t = 0; t < 20; ++t) {
    std::vector<std::size_t> perm(60);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(perm));
    std::vector<double> s2;
    std::vector<Label> l2;
    for (std::size_t i : perm) {
      s2.push_back(scores[i]);
      l2.push_back(labels[i]);
    }
    EXPECT_EQ(roc_auc(s2, l2), auc);
    EXPECT_EQ(confusion(l2, std::vector<Label>(60, P)), c);
  }
}

class ConstantModel final : public models::Classifier {
 public:
  std::string_view name() const override { return "constant"; }
  std::vector<double> predict_scores(const Matrix& x) const override {
    return std::vector<double>(x.rows(), 0.5);
  }
};

Dataset balanced(std::size_t n, std::uint64_t seed) {
  Prng rng(seed);
  Dataset ds;
  ds.features = Matrix(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    ds.labels.push_back(i % 2 ? P : N);
    for (std::size_t c = 0; c < 3; ++c) ds.features(i, c) = rng.uniform() + (i % 2 ? 0.3 : 0.0);
  }
  ds.feature_names = {"a", "b", "c"};
  return ds;
}

TEST(EvaluateModel, ConstantClassifierIsAtChance) {
  const Dataset ds = balanced(100, 1);
  const auto plan = stratified_kfold_split(ds.labels, 10, 2);
  const auto report = evaluate_model(
      "constant", [](const Dataset&, std::uint64_t) { return std::make_unique<ConstantModel>(); },
      ds, plan, {});
  ASSERT_EQ(report.folds.size(), 10u);
  EXPECT_DOUBLE_EQ(report.mean.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(report.mean.roc_auc, 0.5);
  EXPECT_DOUBLE_EQ(report.mean.recall, 1.0);
}

TEST(EvaluateModel, AggregateIsMeanOfFolds) {
  const Dataset ds = balanced(90, 3);
  const auto plan = stratified_kfold_split(ds.labels, 5, 4);
  const auto factory = [](const Dataset& d, std::uint64_t s) { return models::fit_logreg(d, {}, s); };
  const auto report = evaluate_model("logreg", factory, ds, plan, {});
  double acc = 0.0, f1 = 0.0, auc = 0.0;
  for (const auto& f : report.folds) {
    acc += f.positive.accuracy;
    f1 += f.positive.f1;
    auc += f.roc_auc;
    EXPECT_EQ(f.counts.total(), f.n_test);
    EXPECT_EQ(f.n_train + f.n_test, 90u);
    const double p = f.positive.precision, r = f.positive.recall;
    EXPECT_NEAR(f.positive.f1, p + r == 0 ? 0.0 : 2 * p * r / (p + r), 1e-15);
  }
  EXPECT_NEAR(report.mean.accuracy, acc / 5, 1e-12);
  EXPECT_NEAR(report.mean.f1, f1 / 5, 1e-12);
  EXPECT_NEAR(report.mean.roc_auc, auc / 5, 1e-12);
}

TEST(EvaluateModel, ThreadsDoNotChangeResultsAndSeedsAreDerivedPerFold) {
  const Dataset ds = balanced(60, 5);
  const auto plan = stratified_kfold_split(ds.labels, 6, 6);
  std::vector<std::uint64_t> seeds(6);
  std::atomic<int> calls{0};
  const auto factory = [&](const Dataset& d, std::uint64_t s) {
    ++calls;
    return models::fit_logreg(d, {}, s);
  };
  const auto one = evaluate_model("logreg", factory, ds, plan, {41, 1, 0.5, {}});
  const auto four = evaluate_model("logreg", factory, ds, plan, {41, 4, 0.5, {}});
  EXPECT_EQ(report_to_json(one), report_to_json(four));
  EXPECT_EQ(calls.load(), 12);

  std::vector<std::uint64_t> seen;
  std::mutex mu;
  evaluate_model(
      "constant",
      [&](const Dataset&, std::uint64_t s) {
        std::lock_guard lock(mu);
        seen.push_back(s);
        return std::make_unique<ConstantModel>();
      },
      ds, plan, {41, 3, 0.5, {}});
  std::sort(seen.begin(), seen.end());
  std::vector<std::uint64_t> expected;
  for (std::uint64_t f = 0; f < 6; ++f) expected.push_back(41 ^ f);
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(seen, expected);
}

TEST(EvaluateModel, SingleClassFoldIsNamed) {
  Dataset ds = balanced(20, 7);
  const auto plan = kfold_split(20, 4, 0);
  for (std::size_t f = 0; f < 4; ++f) {
    for (std::size_t j = 0; j < plan.folds[f].size(); ++j) {
      ds.labels[plan.folds[f][j]] = (f == 2 || j % 2) ? P : N;
    }
  }
  try {
    materialize_folds(ds, plan);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("fold 2: test"), std::string::npos) << e.what();
  }
}

TEST(Report, JsonRoundTripAndTable) {
  const Dataset ds = balanced(40, 8);
  const auto plan = stratified_kfold_split(ds.labels, 4, 9);
  const auto report = evaluate_model(
      "logreg", [](const Dataset& d, std::uint64_t s) { return models::fit_logreg(d, {}, s); }, ds,
      plan, {});
  const auto j = report_to_json(report);
  EXPECT_EQ(report_to_json(report_from_json(j)), j);
  EXPECT_THROW(report_from_json(nlohmann::json::object()), ParseError);

  const std::vector<MetricsReport> reports{report};
  const std::string table = format_table(reports);
  EXPECT_NE(table.find("Logistic Regression (LR)"), std::string::npos);
  EXPECT_NE(table.find(percent(report.mean.accuracy)), std::string::npos);
  const std::string rows = folds_csv_rows(reports, "paper_faithful");
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 4);
  EXPECT_EQ(rows.rfind("paper_faithful,logreg,0,", 0), 0u);
}

TEST(Report, PercentFormatting) {
  EXPECT_EQ(percent(0.95364), "95.36");
  EXPECT_EQ(percent(1.0), "100.00");
  EXPECT_EQ(percent(0.0), "0.00");
}

}  // namespace
}  // namespace cadpipe::eval
