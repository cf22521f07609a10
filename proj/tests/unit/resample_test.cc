#include <gtest/gtest.h>

#include <filesystem>

#include "cadpipe/core/error.h"
#include "cadpipe/core/prng.h"
#include "cadpipe/ingest/cleaning.h"
#include "cadpipe/ingest/encode.h"
#include "cadpipe/ingest/scaler.h"
#include "cadpipe/ingest/surrogate.h"
#include "cadpipe/resample/knn.h"
#include "cadpipe/resample/smote.h"
#include "oracles.h"

namespace cadpipe::resample {
namespace {

Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                     const std::vector<Label>& labels) {
  Dataset ds;
  for (const auto& r : rows) ds.features.append_row(r);
  ds.labels = labels;
  for (std::size_t c = 0; c < rows.front().size(); ++c) ds.feature_names.push_back("f" + std::to_string(c));
  return ds;
}

constexpr Label P = Label::kPositive;
constexpr Label N = Label::kNegative;

TEST(Knn, NearestTwoByBruteForce) {
  const NeighborIndex index(Matrix(3, 2, {0, 0, 1, 0, 5, 0}));
  const std::vector<double> q{0.9, 0.0};
  EXPECT_EQ(knn_query(index, q, 2), (std::vector<std::size_t>{1, 0}));
}

TEST(Knn, SelfIsNearestUnlessExcluded) {
  const NeighborIndex index(Matrix(3, 2, {0, 0, 1, 0, 5, 0}));
  const std::vector<double> q{5.0, 0.0};
  EXPECT_EQ(knn_query(index, q, 1), (std::vector<std::size_t>{2}));
  EXPECT_EQ(knn_query(index, q, 1, 2), (std::vector<std::size_t>{1}));
}

TEST(Knn, TiesGoToLowerIndex) {
  const NeighborIndex index(Matrix(3, 1, {2, -2, 0}));
  const std::vector<double> q{0.0};
  EXPECT_EQ(knn_query(index, q, 3), (std::vector<std::size_t>{2, 0, 1}));
}

TEST(Knn, RejectsBadQueries) {
  const NeighborIndex index(Matrix(2, 2, {0, 0, 1, 1}));
  const std::vector<double> q{0.0, 0.0};
  EXPECT_THROW(knn_query(index, q, 3), DataError);
  EXPECT_THROW(knn_query(index, q, 2, 0), DataError);
  const std::vector<double> q3{0.0, 0.0, 0.0};
  EXPECT_THROW(knn_query(index, q3, 1), DataError);
  EXPECT_THROW(NeighborIndex(Matrix(1, 1, {std::nan("")})), DataError);
}

TEST(Knn, AgreesWithExhaustiveSortOracle) {
  Prng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(199);
    const std::size_t d = 1 + rng.uniform_index(8);
    const bool grid = rng.bernoulli(0.3);  // integer coordinates force ties
    std::vector<std::vector<double>> refs(n, std::vector<double>(d));
    Matrix m(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        refs[i][j] = grid ? static_cast<double>(rng.uniform_index(4)) : rng.uniform(-1, 1);
        m(i, j) = refs[i][j];
      }
    }
    const NeighborIndex index(m);
    const std::optional<std::size_t> self =
        rng.bernoulli(0.5) ? std::optional<std::size_t>(rng.uniform_index(n)) : std::nullopt;
    const std::vector<double> point = self ? refs[*self] : refs[rng.uniform_index(n)];
    const std::size_t k = 1 + rng.uniform_index(n - 1);
    EXPECT_EQ(knn_query(index, point, k, self), oracle::knn_exhaustive(refs, point, k, self));
  }
}

// Minority point 0 at the origin; three majority points at distance 1,
// two minority points at 1.5 and 1.6, everything else far away.
Dataset danger_configuration() {
  return make_dataset({{0, 0},
                       {1, 0},
                       {0, 1},
                       {-1, 0},
                       {0, -1.5},
                       {1.6, 0},
                       {10, 10},
                       {10, 11},
                       {11, 10},
                       {11, 11}},
                      {N, P, P, P, N, N, P, P, P, P});
}

TEST(PartitionMinority, DangerPointFromHandBuiltGeometry) {
  const Dataset ds = danger_configuration();
  SmoteConfig cfg;
  cfg.m_neighbors = 5;
  // Brute-force check of the construction: 3 of the 5 nearest are majority.
  std::vector<std::vector<double>> refs;
  for (std::size_t i = 0; i < ds.n_samples(); ++i) {
    refs.emplace_back(ds.features.row(i).begin(), ds.features.row(i).end());
  }
  const auto nn = oracle::knn_exhaustive(refs, refs[0], 5, 0);
  const auto majority = std::count_if(nn.begin(), nn.end(), [&](auto i) { return ds.labels[i] == P; });
  ASSERT_EQ(majority, 3);

  const auto part = partition_minority(ds, cfg);
  EXPECT_EQ(part.minority, N);
  EXPECT_EQ(part.minority_rows, (std::vector<std::size_t>{0, 4, 5}));
  EXPECT_NE(std::find(part.danger.begin(), part.danger.end(), 0u), part.danger.end());
}

TEST(PartitionMinority, NoiseAndSafePoints) {
  // Point 0 is surrounded by majority points; points 6..11 form a tight
  // minority cluster far away.
  std::vector<std::vector<double>> rows = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}};
  std::vector<Label> labels = {N, P, P, P, P, P};
  for (int i = 0; i < 6; ++i) {
    rows.push_back({50.0 + 0.1 * i, 50.0});
    labels.push_back(N);
  }
  for (int i = 0; i < 4; ++i) {
    rows.push_back({-50.0 - i, -50.0});
    labels.push_back(P);
  }
  const Dataset ds = make_dataset(rows, labels);
  SmoteConfig cfg;
  const auto part = partition_minority(ds, cfg);
  ASSERT_EQ(part.minority, N);
  EXPECT_EQ(part.noise, (std::vector<std::size_t>{0}));
  EXPECT_EQ(part.safe, (std::vector<std::size_t>{1, 2, 3, 4, 5, 6}));
  EXPECT_TRUE(part.danger.empty());
  const std::size_t total = part.safe.size() + part.danger.size() + part.noise.size();
  EXPECT_EQ(total, part.minority_rows.size());
}

TEST(PartitionMinority, Errors) {
  SmoteConfig cfg;
  EXPECT_THROW(partition_minority(make_dataset({{0}, {1}}, {P, P}), cfg), DataError);
  cfg.m_neighbors = 5;
  EXPECT_THROW(partition_minority(make_dataset({{0}, {1}, {2}}, {P, N, P}), cfg), DataError);
  cfg.m_neighbors = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(BorderlineSmote, InterpolationWithZeroCopiesP) {
  const std::vector<double> p{0, 0}, q{1, 1};
  std::vector<double> out(2);
  interpolate(p, q, 0.0, out);
  EXPECT_EQ(out, p);
  interpolate(p, q, 0.25, out);
  EXPECT_EQ(out, (std::vector<double>{0.25, 0.25}));
}

TEST(BorderlineSmote, BalancedInputIsUnchanged) {
  const Dataset ds = make_dataset({{0}, {1}, {2}, {3}}, {P, N, P, N});
  const auto r = borderline_smote_traced(ds, {});
  EXPECT_EQ(r.dataset, ds);
  EXPECT_TRUE(r.synthesis.empty());
}

TEST(BorderlineSmote, GeometryCountsAndDeterminism) {
  const Dataset ds = danger_configuration();
  SmoteConfig cfg;
  cfg.m_neighbors = 5;
  cfg.k_neighbors = 5;
  cfg.seed = 99;
  const auto r = borderline_smote_traced(ds, cfg);
  EXPECT_EQ(r.dataset.class_counts().positive, r.dataset.class_counts().negative);
  EXPECT_EQ(r.n_original, ds.n_samples());
  for (std::size_t i = 0; i < ds.n_samples(); ++i) {
    EXPECT_TRUE(std::ranges::equal(r.dataset.features.row(i), ds.features.row(i)));
    EXPECT_EQ(r.dataset.labels[i], ds.labels[i]);
  }
  ASSERT_EQ(r.synthesis.size(), r.dataset.n_samples() - ds.n_samples());
  EXPECT_EQ(r.warnings.size(), 1u);  // k clamped to 2
  for (std::size_t j = 0; j < r.synthesis.size(); ++j) {
    const auto& rec = r.synthesis[j];
    EXPECT_EQ(ds.labels[rec.p_row], N);
    EXPECT_EQ(ds.labels[rec.q_row], N);
    EXPECT_NE(rec.p_row, rec.q_row);
    EXPECT_GE(rec.r, 0.0);
    EXPECT_LT(rec.r, 1.0);
    const auto s = r.dataset.features.row(ds.n_samples() + j);
    for (std::size_t c = 0; c < s.size(); ++c) {
      EXPECT_EQ(s[c], ds.features(rec.p_row, c) +
                          rec.r * (ds.features(rec.q_row, c) - ds.features(rec.p_row, c)));
    }
    EXPECT_EQ(r.dataset.labels[ds.n_samples() + j], N);
  }
  EXPECT_EQ(borderline_smote(ds, cfg), r.dataset);
}

TEST(BorderlineSmote, EmptyDangerSetFallsBackToAllMinority) {
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  for (int i = 0; i < 4; ++i) {
    rows.push_back({0.1 * i, 0.0});
    labels.push_back(N);
  }
  for (int i = 0; i < 10; ++i) {
    rows.push_back({100.0 + i, 0.0});
    labels.push_back(P);
  }
  SmoteConfig cfg;
  cfg.m_neighbors = 3;
  cfg.k_neighbors = 2;
  const auto r = borderline_smote_traced(make_dataset(rows, labels), cfg);
  EXPECT_TRUE(r.partition.danger.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.dataset.class_counts(), (ClassCounts{10, 10}));
  // Round-robin over all four minority rows.
  for (std::size_t j = 0; j < r.synthesis.size(); ++j) EXPECT_EQ(r.synthesis[j].p_row, j % 4);
}

TEST(BorderlineSmote, TooSmallMinorityIsAnError) {
  const Dataset ds = make_dataset({{0}, {1}, {2}, {3}}, {N, P, P, P});
  SmoteConfig cfg;
  cfg.m_neighbors = 2;
  EXPECT_THROW(borderline_smote(ds, cfg), DataError);
}

TEST(BorderlineSmote, SnapColumnsProduceObservedValues) {
  const Dataset ds = danger_configuration();
  SmoteConfig cfg;
  cfg.snap_columns = {0};
  const auto out = borderline_smote(ds, cfg);
  for (std::size_t r = ds.n_samples(); r < out.n_samples(); ++r) {
    bool found = false;
    for (std::size_t i = 0; i < ds.n_samples(); ++i) found |= ds.features(i, 0) == out.features(r, 0);
    EXPECT_TRUE(found);
  }
}

TEST(BorderlineSmote, SurrogateCountsBalanceTo216Each) {
  using namespace cadpipe::ingest;
  const auto schema = load_schema(std::filesystem::path(CADPIPE_SOURCE_DIR) / "data" /
                                  "z_alizadeh_sani_extension.schema.json");
  const auto cleaned = remove_constant_columns(make_surrogate_table(schema, {}), "Cath");
  const Dataset ds = encode(cleaned.table, schema);
  const Dataset scaled = apply_scaler(ds, fit_scaler(ds));
  const Dataset balanced = borderline_smote(scaled, {});
  EXPECT_EQ(balanced.class_counts(), (ClassCounts{216, 216}));
  EXPECT_EQ(balanced.n_samples(), 432u);
}

}  // namespace
}  // namespace cadpipe::resample
