#include "cadpipe/ingest/schema.h"

#include <json.hpp>
#include <set>

#include "cadpipe/core/error.h"
#include "cadpipe/ingest/csv.h"

namespace cadpipe::ingest {

using nlohmann::json;

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kNumeric:
      return "numeric";
    case FeatureKind::kBinary:
      return "binary";
    case FeatureKind::kCategorical:
      return "categorical";
  }
  return "unknown";
}

const FeatureSpec* DatasetSchema::find(std::string_view name) const {
  for (const auto& f : features) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

bool DatasetSchema::is_ignored(std::string_view name) const {
  for (const auto& c : ignored_columns) {
    if (c == name) return true;
  }
  return false;
}

void DatasetSchema::validate() const {
  if (label_name.empty()) throw ConfigError("schema: label name is empty");
  if (positive_label.empty()) throw ConfigError("schema: positive_label is empty");
  std::set<std::string> names;
  for (const auto& f : features) {
    if (f.name.empty()) throw ConfigError("schema: feature with empty name");
    if (!names.insert(f.name).second) {
      throw ConfigError("schema: duplicate feature name '" + f.name + "'");
    }
    if (f.name == label_name) {
      throw ConfigError("schema: label '" + label_name + "' collides with a feature name");
    }
    std::set<std::string> levels(f.levels.begin(), f.levels.end());
    if (levels.size() != f.levels.size()) {
      throw ConfigError("schema: feature '" + f.name + "' has duplicate levels");
    }
    if (f.kind == FeatureKind::kBinary && f.levels.size() != 2) {
      throw ConfigError("schema: binary feature '" + f.name + "' needs exactly 2 levels");
    }
    if (f.kind == FeatureKind::kCategorical && f.levels.empty()) {
      throw ConfigError("schema: categorical feature '" + f.name + "' has no levels");
    }
  }
  for (const auto& c : ignored_columns) {
    if (names.contains(c) || c == label_name) {
      throw ConfigError("schema: ignored column '" + c + "' is also declared as feature or label");
    }
  }
}

DatasetSchema parse_schema_json(std::string_view text) {
  DatasetSchema schema;
  try {
    const json doc = json::parse(text);
    schema.label_name = doc.at("label").get<std::string>();
    schema.positive_label = doc.at("positive_label").get<std::string>();
    if (doc.contains("ignored_columns")) {
      schema.ignored_columns = doc.at("ignored_columns").get<std::vector<std::string>>();
    }
    for (const auto& item : doc.at("features")) {
      FeatureSpec spec;
      spec.name = item.at("name").get<std::string>();
      const auto kind = item.at("kind").get<std::string>();
      if (kind == "numeric") {
        spec.kind = FeatureKind::kNumeric;
      } else if (kind == "binary") {
        spec.kind = FeatureKind::kBinary;
        spec.levels = {"0", "1"};
      } else if (kind == "categorical") {
        spec.kind = FeatureKind::kCategorical;
      } else {
        throw ConfigError("schema: feature '" + spec.name + "' has unknown kind '" + kind + "'");
      }
      if (item.contains("levels")) spec.levels = item.at("levels").get<std::vector<std::string>>();
      schema.features.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("schema: ") + e.what());
  }
  schema.validate();
  return schema;
}

DatasetSchema load_schema(const std::filesystem::path& path) {
  try {
    return parse_schema_json(read_text_file(path));
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
}

std::string schema_to_json(const DatasetSchema& schema) {
  json doc;
  doc["label"] = schema.label_name;
  doc["positive_label"] = schema.positive_label;
  if (!schema.ignored_columns.empty()) doc["ignored_columns"] = schema.ignored_columns;
  doc["features"] = json::array();
  for (const auto& f : schema.features) {
    json item;
    item["name"] = f.name;
    item["kind"] = std::string(to_string(f.kind));
    if (f.kind != FeatureKind::kNumeric) item["levels"] = f.levels;
    doc["features"].push_back(std::move(item));
  }
  return doc.dump(2);
}

}  // namespace cadpipe::ingest
