#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cadpipe/models/classifier.h"
#include "cadpipe/models/cnn.h"
#include "cadpipe/models/forest.h"
#include "cadpipe/models/logreg.h"
#include "cadpipe/models/mlp.h"
#include "cadpipe/models/tree.h"

namespace cadpipe::models {

struct ModelSettings {
  CnnConfig cnn;
  TreeConfig tree;
  ForestConfig forest;
  LogRegConfig logreg;
  MlpConfig mlp;
};

// Every model name, in report order: tree, forest, logreg, mlp, cnn.
const std::vector<std::string>& model_names();

// Human-readable row title for reports.
std::string_view display_name(std::string_view model);

// Throws ConfigError for an unknown name.
ModelFactory make_factory(std::string_view model, const ModelSettings& settings);

}  // namespace cadpipe::models
