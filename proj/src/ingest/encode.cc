#include "cadpipe/ingest/encode.h"

#include <charconv>
#include <cmath>

#include "cadpipe/core/error.h"

namespace cadpipe::ingest {
namespace {

double parse_real(const std::string& cell, std::size_t row, const std::string& column) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw DataError("row " + std::to_string(row) + ", column '" + column +
                    "': cannot parse '" + cell + "' as a number");
  }
  return value;
}

double level_index(const FeatureSpec& spec, const std::string& cell, std::size_t row) {
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    if (spec.levels[i] == cell) return static_cast<double>(i);
  }
  throw DataError("row " + std::to_string(row) + ", column '" + spec.name +
                  "': unknown level '" + cell + "'");
}

}  // namespace

void check_columns_declared(const RawTable& table, const DatasetSchema& schema) {
  if (table.column_index(schema.label_name) == std::string::npos) {
    throw DataError("label column '" + schema.label_name + "' missing from input");
  }
  for (const auto& f : schema.features) {
    if (table.column_index(f.name) == std::string::npos) {
      throw DataError("declared feature '" + f.name + "' missing from input");
    }
  }
}

Dataset encode(const RawTable& table, const DatasetSchema& schema) {
  const std::size_t label_col = table.column_index(schema.label_name);
  if (label_col == std::string::npos) {
    throw DataError("label column '" + schema.label_name + "' missing from input");
  }
  std::vector<std::pair<std::size_t, const FeatureSpec*>> columns;
  for (std::size_t c = 0; c < table.n_cols(); ++c) {
    if (c == label_col || schema.is_ignored(table.header[c])) continue;
    const FeatureSpec* spec = schema.find(table.header[c]);
    if (spec == nullptr) {
      throw DataError("column '" + table.header[c] + "' is not declared in the schema");
    }
    columns.emplace_back(c, spec);
  }
  if (columns.empty()) throw DataError("no predictor columns left to encode");

  Dataset ds;
  ds.label_name = schema.label_name;
  for (const auto& [c, spec] : columns) ds.feature_names.push_back(spec->name);
  ds.features = Matrix(table.n_rows(), columns.size());
  ds.labels.reserve(table.n_rows());

  std::string negative_seen;
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t row_no = r + 1;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const auto& [c, spec] = columns[j];
      ds.features(r, j) = spec->kind == FeatureKind::kNumeric
                              ? parse_real(row[c], row_no, spec->name)
                              : level_index(*spec, row[c], row_no);
    }
    const std::string& label = row[label_col];
    if (label != schema.positive_label) {
      if (negative_seen.empty()) negative_seen = label;
      if (label != negative_seen) {
        throw DataError("row " + std::to_string(row_no) + ": label column '" +
                        schema.label_name + "' has a third value '" + label + "'");
      }
    }
    ds.labels.push_back(label == schema.positive_label ? Label::kPositive : Label::kNegative);
  }
  return ds;
}

}  // namespace cadpipe::ingest
