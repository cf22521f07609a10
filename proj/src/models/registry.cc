#include "cadpipe/models/registry.h"

#include "cadpipe/core/error.h"

namespace cadpipe::models {

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"tree", "forest", "logreg", "mlp", "cnn"};
  return names;
}

std::string_view display_name(std::string_view model) {
  if (model == "tree") return "Decision Tree (DT)";
  if (model == "forest") return "Random Forest (RF)";
  if (model == "logreg") return "Logistic Regression (LR)";
  if (model == "mlp") return "Artificial Neural Network (ANN)";
  if (model == "cnn") return "CNN (balanced + augmented)";
  throw ConfigError("unknown model '" + std::string(model) + "'");
}

ModelFactory make_factory(std::string_view model, const ModelSettings& s) {
  if (model == "tree") {
    return [cfg = s.tree](const Dataset& d, std::uint64_t seed) { return fit_tree(d, cfg, seed); };
  }
  if (model == "forest") {
    return [cfg = s.forest](const Dataset& d, std::uint64_t seed) { return fit_forest(d, cfg, seed); };
  }
  if (model == "logreg") {
    return [cfg = s.logreg](const Dataset& d, std::uint64_t seed) { return fit_logreg(d, cfg, seed); };
  }
  if (model == "mlp") {
    return [cfg = s.mlp](const Dataset& d, std::uint64_t seed) { return fit_mlp(d, cfg, seed); };
  }
  if (model == "cnn") {
    return [cfg = s.cnn](const Dataset& d, std::uint64_t seed) { return fit_cnn(d, cfg, seed); };
  }
  throw ConfigError("unknown model '" + std::string(model) + "'");
}

}  // namespace cadpipe::models
