#include "cadpipe/nn/spec.h"

#include <json.hpp>

#include "cadpipe/core/error.h"

namespace cadpipe::nn {

using nlohmann::json;

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kLinear:
      return "linear";
    case Activation::kRelu:
      return "relu";
    case Activation::kSigmoid:
      return "sigmoid";
  }
  return "unknown";
}

Activation activation_from_string(std::string_view s) {
  if (s == "linear") return Activation::kLinear;
  if (s == "relu") return Activation::kRelu;
  if (s == "sigmoid") return Activation::kSigmoid;
  throw ConfigError("unknown activation '" + std::string(s) + "'");
}

std::string_view layer_kind(const LayerSpec& spec) {
  struct Visitor {
    std::string_view operator()(const Conv1DSpec&) const { return "conv1d"; }
    std::string_view operator()(const DenseSpec&) const { return "dense"; }
    std::string_view operator()(const DropoutSpec&) const { return "dropout"; }
    std::string_view operator()(const FlattenSpec&) const { return "flatten"; }
  };
  return std::visit(Visitor{}, spec);
}

std::string_view to_string(LossKind loss) {
  return loss == LossKind::kBinaryCrossEntropy ? "binary_cross_entropy" : "mean_squared_error";
}

void AdamParams::validate() const {
  if (!(lr > 0.0)) throw ConfigError("adam: lr must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("adam: beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("adam: beta2 must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("adam: epsilon must be positive");
}

std::vector<Shape> NetworkSpec::output_shapes() const {
  if (input_shape.empty() || shape_size(input_shape) == 0) {
    throw ConfigError("network: input shape must be non-empty");
  }
  std::vector<Shape> shapes;
  Shape current = input_shape;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string where = "layer " + std::to_string(i) + " (" +
                              std::string(layer_kind(layers[i])) + "): ";
    if (const auto* conv = std::get_if<Conv1DSpec>(&layers[i])) {
      if (current.size() != 2) {
        throw ConfigError(where + "expects (length, channels) input, got " +
                          shape_to_string(current));
      }
      if (conv->filters < 1 || conv->kernel < 1 || conv->stride < 1) {
        throw ConfigError(where + "filters, kernel and stride must be >= 1");
      }
      if (current[0] < conv->kernel) {
        throw ConfigError(where + "input length " + std::to_string(current[0]) +
                          " is shorter than kernel " + std::to_string(conv->kernel));
      }
      if (conv->l2 < 0.0) throw ConfigError(where + "l2 must be >= 0");
      current = {(current[0] + conv->stride - 1) / conv->stride, conv->filters};
    } else if (const auto* dense = std::get_if<DenseSpec>(&layers[i])) {
      if (current.size() != 1) {
        throw ConfigError(where + "expects flat input, got " + shape_to_string(current));
      }
      if (dense->units < 1) throw ConfigError(where + "units must be >= 1");
      if (dense->l2 < 0.0) throw ConfigError(where + "l2 must be >= 0");
      current = {dense->units};
    } else if (const auto* drop = std::get_if<DropoutSpec>(&layers[i])) {
      if (!(drop->p >= 0.0 && drop->p < 1.0)) throw ConfigError(where + "p must lie in [0, 1)");
    } else {
      current = {shape_size(current)};
    }
    shapes.push_back(current);
  }
  return shapes;
}

Shape NetworkSpec::output_shape() const {
  const auto shapes = output_shapes();
  return shapes.empty() ? input_shape : shapes.back();
}

void NetworkSpec::validate() const {
  const Shape out = output_shape();
  if (out.size() != 1) {
    throw ConfigError("network: final layer must produce a flat output, got " +
                      shape_to_string(out));
  }
  if (epochs < 1) throw ConfigError("network: epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("network: batch_size must be >= 1");
  optimizer.validate();
}

std::string spec_to_json(const NetworkSpec& spec) {
  json doc;
  doc["input_shape"] = spec.input_shape;
  doc["loss"] = std::string(to_string(spec.loss));
  doc["adam"] = {{"lr", spec.optimizer.lr},
                 {"beta1", spec.optimizer.beta1},
                 {"beta2", spec.optimizer.beta2},
                 {"epsilon", spec.optimizer.epsilon}};
  doc["epochs"] = spec.epochs;
  doc["batch_size"] = spec.batch_size;
  doc["seed"] = spec.seed;
  doc["layers"] = json::array();
  for (const auto& layer : spec.layers) {
    json item;
    item["type"] = std::string(layer_kind(layer));
    if (const auto* c = std::get_if<Conv1DSpec>(&layer)) {
      item["filters"] = c->filters;
      item["kernel"] = c->kernel;
      item["stride"] = c->stride;
      item["l2"] = c->l2;
      item["activation"] = std::string(to_string(c->activation));
    } else if (const auto* d = std::get_if<DenseSpec>(&layer)) {
      item["units"] = d->units;
      item["l2"] = d->l2;
      item["activation"] = std::string(to_string(d->activation));
    } else if (const auto* p = std::get_if<DropoutSpec>(&layer)) {
      item["p"] = p->p;
    }
    doc["layers"].push_back(std::move(item));
  }
  return doc.dump();
}

NetworkSpec spec_from_json(std::string_view text) {
  NetworkSpec spec;
  try {
    const json doc = json::parse(text);
    spec.input_shape = doc.at("input_shape").get<Shape>();
    const auto loss = doc.at("loss").get<std::string>();
    if (loss == "binary_cross_entropy") {
      spec.loss = LossKind::kBinaryCrossEntropy;
    } else if (loss == "mean_squared_error") {
      spec.loss = LossKind::kMeanSquaredError;
    } else {
      throw ConfigError("unknown loss '" + loss + "'");
    }
    const auto& adam = doc.at("adam");
    spec.optimizer = {adam.at("lr").get<double>(), adam.at("beta1").get<double>(),
                      adam.at("beta2").get<double>(), adam.at("epsilon").get<double>()};
    spec.epochs = doc.at("epochs").get<std::size_t>();
    spec.batch_size = doc.at("batch_size").get<std::size_t>();
    spec.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& item : doc.at("layers")) {
      const auto type = item.at("type").get<std::string>();
      if (type == "conv1d") {
        spec.layers.emplace_back(Conv1DSpec{
            item.at("filters").get<std::size_t>(), item.at("kernel").get<std::size_t>(),
            item.at("stride").get<std::size_t>(), item.at("l2").get<double>(),
            activation_from_string(item.at("activation").get<std::string>())});
      } else if (type == "dense") {
        spec.layers.emplace_back(
            DenseSpec{item.at("units").get<std::size_t>(), item.at("l2").get<double>(),
                      activation_from_string(item.at("activation").get<std::string>())});
      } else if (type == "dropout") {
        spec.layers.emplace_back(DropoutSpec{item.at("p").get<double>()});
      } else if (type == "flatten") {
        spec.layers.emplace_back(FlattenSpec{});
      } else {
        throw ConfigError("unknown layer type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("network spec: ") + e.what());
  }
  return spec;
}

}  // namespace cadpipe::nn
