#pragma once

#include <string>
#include <vector>

#include "cadpipe/core/dataset.h"

namespace cadpipe::ingest {

struct FeatureSummary {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::size_t distinct = 0;
  double mean_positive = 0.0;
  double mean_negative = 0.0;
};

std::vector<FeatureSummary> summarize(const Dataset& ds);

// One CSV row per feature.
std::string summary_to_csv(const std::vector<FeatureSummary>& rows);

}  // namespace cadpipe::ingest
