#include "cadpipe/resample/smote.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "cadpipe/core/error.h"
#include "cadpipe/core/prng.h"
#include "cadpipe/resample/knn.h"

namespace cadpipe::resample {
namespace {

void snap(std::span<double> row, const std::vector<std::vector<double>>& levels,
          const std::vector<std::size_t>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const auto& values = levels[i];
    double& v = row[columns[i]];
    auto it = std::lower_bound(values.begin(), values.end(), v);
    if (it == values.end()) {
      v = values.back();
    } else if (it != values.begin() && v - *std::prev(it) <= *it - v) {
      v = *std::prev(it);
    } else {
      v = *it;
    }
  }
}

}  // namespace

void interpolate(std::span<const double> p, std::span<const double> q, double r,
                 std::span<double> out) {
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = p[c] + r * (q[c] - p[c]);
}

void SmoteConfig::validate() const {
  if (m_neighbors < 1) throw ConfigError("smote: m_neighbors must be >= 1");
  if (k_neighbors < 1) throw ConfigError("smote: k_neighbors must be >= 1");
}

Label minority_label(const Dataset& ds) {
  const auto counts = ds.class_counts();
  return counts.positive < counts.negative ? Label::kPositive : Label::kNegative;
}

MinorityPartition partition_minority(const Dataset& ds, const SmoteConfig& cfg) {
  cfg.validate();
  const auto counts = ds.class_counts();
  if (counts.positive == 0 || counts.negative == 0) {
    throw DataError("smote: both classes must be present (positive " +
                    std::to_string(counts.positive) + ", negative " +
                    std::to_string(counts.negative) + ")");
  }
  if (cfg.m_neighbors > ds.n_samples() - 1) {
    throw DataError("smote: m_neighbors = " + std::to_string(cfg.m_neighbors) +
                    " needs at least " + std::to_string(cfg.m_neighbors + 1) + " samples");
  }

  MinorityPartition part;
  part.minority = minority_label(ds);
  const NeighborIndex all(ds.features);
  const std::size_t m = cfg.m_neighbors;
  for (std::size_t row = 0; row < ds.n_samples(); ++row) {
    if (ds.labels[row] != part.minority) continue;
    const std::size_t pos = part.minority_rows.size();
    part.minority_rows.push_back(row);
    const auto nn = knn_query(all, ds.features.row(row), m, row);
    const auto majority = static_cast<std::size_t>(std::count_if(
        nn.begin(), nn.end(), [&](std::size_t i) { return ds.labels[i] != part.minority; }));
    if (majority == m) {
      part.noise.push_back(pos);
    } else if (2 * majority >= m) {
      part.danger.push_back(pos);
    } else {
      part.safe.push_back(pos);
    }
  }
  return part;
}

SmoteResult borderline_smote_traced(const Dataset& ds, const SmoteConfig& cfg) {
  cfg.validate();
  SmoteResult result;
  result.dataset = ds;
  result.n_original = ds.n_samples();

  const auto counts = ds.class_counts();
  if (counts.positive == counts.negative) return result;

  result.partition = partition_minority(ds, cfg);
  const auto& part = result.partition;
  const std::size_t n_minority = part.minority_rows.size();
  if (n_minority < 2) {
    throw DataError("smote: minority class has " + std::to_string(n_minority) +
                    " sample(s); at least 2 are needed to interpolate");
  }
  const std::size_t deficit = counts.of(other(part.minority)) - n_minority;

  std::size_t k = cfg.k_neighbors;
  if (k > n_minority - 1) {
    k = n_minority - 1;
    result.warnings.push_back("smote: k_neighbors clamped to " + std::to_string(k));
  }

  std::vector<std::size_t> seeds = part.danger;
  if (seeds.empty()) {
    result.warnings.push_back(
        "smote: danger set is empty; synthesizing from all minority samples");
    seeds.resize(n_minority);
    for (std::size_t i = 0; i < n_minority; ++i) seeds[i] = i;
  }

  const NeighborIndex minority_index(ds.features.select_rows(part.minority_rows));
  std::vector<std::vector<std::size_t>> neighbors(n_minority);

  std::vector<std::vector<double>> levels;
  for (std::size_t c : cfg.snap_columns) {
    if (c >= ds.n_features()) throw ConfigError("smote: snap column out of range");
    std::set<double> values;
    for (std::size_t r = 0; r < ds.n_samples(); ++r) values.insert(ds.features(r, c));
    levels.emplace_back(values.begin(), values.end());
  }

  Prng rng(cfg.seed);
  std::vector<double> synthetic(ds.n_features());
  for (std::size_t j = 0; j < deficit; ++j) {
    const std::size_t p = seeds[j % seeds.size()];
    if (neighbors[p].empty()) {
      neighbors[p] = knn_query(minority_index, minority_index.reference().row(p), k, p);
    }
    const std::size_t q = neighbors[p][rng.uniform_index(k)];
    const double r = rng.uniform();
    const auto pv = minority_index.reference().row(p);
    const auto qv = minority_index.reference().row(q);
    interpolate(pv, qv, r, synthetic);
    if (!levels.empty()) snap(synthetic, levels, cfg.snap_columns);
    result.dataset.features.append_row(synthetic);
    result.dataset.labels.push_back(part.minority);
    result.synthesis.push_back({part.minority_rows[p], part.minority_rows[q], r});
  }
  return result;
}

Dataset borderline_smote(const Dataset& ds, const SmoteConfig& cfg) {
  return std::move(borderline_smote_traced(ds, cfg).dataset);
}

}  // namespace cadpipe::resample
