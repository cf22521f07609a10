#include "cadpipe/ingest/summary.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "cadpipe/core/dataset_io.h"

namespace cadpipe::ingest {

std::vector<FeatureSummary> summarize(const Dataset& ds) {
  std::vector<FeatureSummary> out;
  const auto counts = ds.class_counts();
  for (std::size_t c = 0; c < ds.n_features(); ++c) {
    FeatureSummary s;
    s.name = ds.feature_names[c];
    std::set<double> distinct;
    double sum = 0.0, sum_pos = 0.0, sum_neg = 0.0;
    s.min = s.max = ds.n_samples() ? ds.features(0, c) : 0.0;
    for (std::size_t r = 0; r < ds.n_samples(); ++r) {
      const double v = ds.features(r, c);
      distinct.insert(v);
      s.min = std::min(s.min, v);
      s.max = std::max(s.max, v);
      sum += v;
      (ds.labels[r] == Label::kPositive ? sum_pos : sum_neg) += v;
    }
    const double n = static_cast<double>(ds.n_samples());
    s.mean = n > 0 ? sum / n : 0.0;
    double sq = 0.0;
    for (std::size_t r = 0; r < ds.n_samples(); ++r) {
      const double dv = ds.features(r, c) - s.mean;
      sq += dv * dv;
    }
    s.stddev = n > 0 ? std::sqrt(sq / n) : 0.0;
    s.distinct = distinct.size();
    s.mean_positive = counts.positive ? sum_pos / static_cast<double>(counts.positive) : 0.0;
    s.mean_negative = counts.negative ? sum_neg / static_cast<double>(counts.negative) : 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

std::string summary_to_csv(const std::vector<FeatureSummary>& rows) {
  std::string out = "feature,min,max,mean,std,distinct,mean_positive,mean_negative\n";
  for (const auto& s : rows) {
    out += s.name + ',' + format_double(s.min) + ',' + format_double(s.max) + ',' +
           format_double(s.mean) + ',' + format_double(s.stddev) + ',' +
           std::to_string(s.distinct) + ',' + format_double(s.mean_positive) + ',' +
           format_double(s.mean_negative) + '\n';
  }
  return out;
}

}  // namespace cadpipe::ingest
