#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cadpipe::ingest {

enum class FeatureKind { kNumeric, kBinary, kCategorical };

std::string_view to_string(FeatureKind kind);

// Binary features use exactly two levels: levels[0] -> 0, levels[1] -> 1.
// Categorical features map each level to its position in `levels`.
struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  std::vector<std::string> levels;

  bool operator==(const FeatureSpec&) const = default;
};

struct DatasetSchema {
  std::vector<FeatureSpec> features;
  std::string label_name;
  std::string positive_label;
  // Columns present in the raw file that are dropped before encoding.
  std::vector<std::string> ignored_columns;

  const FeatureSpec* find(std::string_view name) const;
  bool is_ignored(std::string_view name) const;

  // Throws ConfigError on duplicate or empty names, duplicate levels,
  // malformed binary level lists or a label/feature collision.
  void validate() const;

  bool operator==(const DatasetSchema&) const = default;
};

// JSON declaration, see data/README.md for the field reference.
DatasetSchema parse_schema_json(std::string_view text);
DatasetSchema load_schema(const std::filesystem::path& path);
std::string schema_to_json(const DatasetSchema& schema);

}  // namespace cadpipe::ingest
