#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cadpipe/ingest/csv.h"
#include "cadpipe/ingest/schema.h"

namespace cadpipe::ingest {

// Synthetic stand-in for a raw clinical table. It follows a schema exactly
// (column names, kinds, level sets, label values) so the whole pipeline can
// run without the real data; its values carry a tunable amount of class
// signal and have no clinical meaning.
struct SurrogateOptions {
  std::size_t n_positive = 216;
  std::size_t n_negative = 87;
  std::string negative_label = "Normal";
  std::vector<std::string> constant_columns = {"Exertional CP"};
  // Mean shift between classes, in noise standard deviations, for the
  // strongest feature.
  double separation = 1.0;
  // Fraction of features that carry no class signal at all.
  double null_fraction = 0.4;
  std::uint64_t seed = 303;
};

RawTable make_surrogate_table(const DatasetSchema& schema, const SurrogateOptions& options);

std::string table_to_csv(const RawTable& table);

}  // namespace cadpipe::ingest
