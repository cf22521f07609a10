#include "cadpipe/pipeline/config.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cadpipe/core/error.h"
#include "cadpipe/ingest/csv.h"

namespace cadpipe::pipeline {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"paths", {"raw", "schema", "output"}},
      {"run", {"seed", "leakage_mode", "threads"}},
      {"smote", {"m_neighbors", "k_neighbors", "snap_discrete"}},
      {"autoencoder", {"hidden", "epochs", "batch_size", "lr", "target_total"}},
      {"cv", {"k", "stratified", "threshold"}},
      {"models", {"enabled"}},
      {"cnn",
       {"conv_filters", "kernel", "stride", "conv_l2", "dense_units", "dropout", "lr", "epochs",
        "batch_size"}},
      {"tree", {"max_depth", "min_samples_split"}},
      {"forest", {"n_trees", "max_features", "bootstrap", "max_depth", "min_samples_split"}},
      {"logreg", {"lr", "epochs", "l2"}},
      {"mlp", {"hidden", "lr", "epochs", "batch_size"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto part = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    if (!part.empty()) out.push_back(part);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  const std::string* raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return nullptr;
    const auto it = sec->find(key);
    if (it == sec->not_found()) return nullptr;
    return &it->second.data();
  }

  void str(const std::string& s, const std::string& k, std::string& out) const {
    if (const auto* v = raw(s, k)) out = trim(*v);
  }

  template <typename T>
  void number(const std::string& s, const std::string& k, T& out) const {
    const auto* v = raw(s, k);
    if (!v) return;
    const std::string text = trim(*v);
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
      throw ConfigError("config [" + s + "] " + k + ": cannot parse '" + text + "'");
    }
    out = value;
  }

  void boolean(const std::string& s, const std::string& k, bool& out) const {
    const auto* v = raw(s, k);
    if (!v) return;
    const std::string text = trim(*v);
    if (text == "true" || text == "yes" || text == "1") {
      out = true;
    } else if (text == "false" || text == "no" || text == "0") {
      out = false;
    } else {
      throw ConfigError("config [" + s + "] " + k + ": expected true or false, got '" + text + "'");
    }
  }

  void sizes(const std::string& s, const std::string& k, std::vector<std::size_t>& out) const {
    const auto* v = raw(s, k);
    if (!v) return;
    out.clear();
    for (const auto& item : split_list(*v)) {
      std::size_t value = 0;
      const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
      if (ec != std::errc{} || end != item.data() + item.size()) {
        throw ConfigError("config [" + s + "] " + k + ": cannot parse '" + item + "'");
      }
      out.push_back(value);
    }
  }

 private:
  const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      if (body.empty() && !body.data().empty()) {
        throw ConfigError("config: key '" + section + "' outside any section");
      }
      throw ConfigError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) {
        throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
}

}  // namespace

std::string_view to_string(LeakageMode m) {
  return m == LeakageMode::kPaperFaithful ? "paper_faithful" : "leakage_safe";
}

LeakageMode leakage_mode_from_string(std::string_view s) {
  if (s == "paper_faithful" || s == "paper-faithful") return LeakageMode::kPaperFaithful;
  if (s == "leakage_safe" || s == "leakage-safe") return LeakageMode::kLeakageSafe;
  throw ConfigError("unknown leakage mode '" + std::string(s) +
                    "' (expected paper_faithful or leakage_safe)");
}

augment::AutoencoderSpec PipelineConfig::autoencoder_spec(std::size_t input_dim,
                                                          std::uint64_t ae_seed) const {
  augment::AutoencoderSpec s;
  s.input_dim = input_dim;
  s.hidden_dim = ae_hidden;
  s.epochs = ae_epochs;
  s.batch_size = ae_batch_size;
  s.lr = ae_lr;
  s.seed = ae_seed;
  return s;
}

void PipelineConfig::validate() const {
  if (raw_path.empty()) throw ConfigError("config: [paths] raw is required");
  if (schema_path.empty()) throw ConfigError("config: [paths] schema is required");
  if (output_dir.empty()) throw ConfigError("config: [paths] output must not be empty");
  if (modes.empty()) throw ConfigError("config: no leakage mode selected");
  if (threads == 0) throw ConfigError("config: [run] threads must be positive");
  if (smote_m_neighbors == 0 || smote_k_neighbors == 0) {
    throw ConfigError("config: [smote] neighbor counts must be positive");
  }
  if (ae_hidden == 0 || ae_epochs == 0 || ae_batch_size == 0 || !(ae_lr > 0.0)) {
    throw ConfigError("config: [autoencoder] hidden, epochs, batch_size and lr must be positive");
  }
  if (cv_k < 2) throw ConfigError("config: [cv] k must be at least 2");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("config: [cv] threshold must be in (0, 1)");
  if (enabled_models.empty()) throw ConfigError("config: [models] enabled lists no model");
  for (const auto& name : enabled_models) {
    models::make_factory(name, models);
  }
  models.cnn.validate();
  models.tree.validate();
  models.forest.validate();
  models.logreg.validate();
  models.mlp.validate();
}

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config: " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  check_keys(tree);
  const Reader r(tree);

  PipelineConfig c;
  c.base_dir = base_dir;
  r.str("paths", "raw", c.raw_path);
  r.str("paths", "schema", c.schema_path);
  r.str("paths", "output", c.output_dir);

  r.number("run", "seed", c.seed);
  r.number("run", "threads", c.threads);
  if (const auto* mode = r.raw("run", "leakage_mode")) {
    const std::string m = trim(*mode);
    if (m == "both") {
      c.modes = {LeakageMode::kPaperFaithful, LeakageMode::kLeakageSafe};
    } else {
      c.modes = {leakage_mode_from_string(m)};
    }
  }

  r.number("smote", "m_neighbors", c.smote_m_neighbors);
  r.number("smote", "k_neighbors", c.smote_k_neighbors);
  r.boolean("smote", "snap_discrete", c.smote_snap_discrete);

  r.number("autoencoder", "hidden", c.ae_hidden);
  r.number("autoencoder", "epochs", c.ae_epochs);
  r.number("autoencoder", "batch_size", c.ae_batch_size);
  r.number("autoencoder", "lr", c.ae_lr);
  if (const auto* t = r.raw("autoencoder", "target_total")) {
    const std::string v = trim(*t);
    if (!v.empty() && v != "none") {
      std::size_t total = 0;
      r.number("autoencoder", "target_total", total);
      c.target_total = total;
    }
  }

  r.number("cv", "k", c.cv_k);
  r.boolean("cv", "stratified", c.cv_stratified);
  r.number("cv", "threshold", c.threshold);

  if (const auto* enabled = r.raw("models", "enabled")) c.enabled_models = split_list(*enabled);

  auto& m = c.models;
  r.sizes("cnn", "conv_filters", m.cnn.conv_filters);
  r.number("cnn", "kernel", m.cnn.kernel);
  r.number("cnn", "stride", m.cnn.stride);
  r.number("cnn", "conv_l2", m.cnn.conv_l2);
  r.sizes("cnn", "dense_units", m.cnn.dense_units);
  r.number("cnn", "dropout", m.cnn.dropout);
  r.number("cnn", "lr", m.cnn.lr);
  r.number("cnn", "epochs", m.cnn.epochs);
  r.number("cnn", "batch_size", m.cnn.batch_size);

  r.number("tree", "max_depth", m.tree.max_depth);
  r.number("tree", "min_samples_split", m.tree.min_samples_split);

  r.number("forest", "n_trees", m.forest.n_trees);
  r.number("forest", "max_features", m.forest.max_features);
  r.boolean("forest", "bootstrap", m.forest.bootstrap);
  r.number("forest", "max_depth", m.forest.max_depth);
  r.number("forest", "min_samples_split", m.forest.min_samples_split);

  r.number("logreg", "lr", m.logreg.lr);
  r.number("logreg", "epochs", m.logreg.epochs);
  r.number("logreg", "l2", m.logreg.l2);

  r.sizes("mlp", "hidden", m.mlp.hidden);
  r.number("mlp", "lr", m.mlp.lr);
  r.number("mlp", "epochs", m.mlp.epochs);
  r.number("mlp", "batch_size", m.mlp.batch_size);

  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = ingest::read_text_file(path);
  } catch (const DataError& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  return parse_config(text, path.parent_path());
}

nlohmann::json config_to_json(const PipelineConfig& c) {
  using nlohmann::json;
  json modes = json::array();
  for (LeakageMode mode : c.modes) modes.push_back(to_string(mode));
  const auto& m = c.models;
  return {
      {"paths", {{"raw", c.raw_path}, {"schema", c.schema_path}, {"output", c.output_dir}}},
      {"run", {{"seed", c.seed}, {"leakage_modes", modes}, {"threads", c.threads}}},
      {"smote",
       {{"m_neighbors", c.smote_m_neighbors},
        {"k_neighbors", c.smote_k_neighbors},
        {"snap_discrete", c.smote_snap_discrete}}},
      {"autoencoder",
       {{"hidden", c.ae_hidden},
        {"epochs", c.ae_epochs},
        {"batch_size", c.ae_batch_size},
        {"lr", c.ae_lr},
        {"target_total", c.target_total ? json(*c.target_total) : json(nullptr)}}},
      {"cv", {{"k", c.cv_k}, {"stratified", c.cv_stratified}, {"threshold", c.threshold}}},
      {"models", {{"enabled", c.enabled_models}}},
      {"cnn",
       {{"conv_filters", m.cnn.conv_filters},
        {"kernel", m.cnn.kernel},
        {"stride", m.cnn.stride},
        {"conv_l2", m.cnn.conv_l2},
        {"dense_units", m.cnn.dense_units},
        {"dropout", m.cnn.dropout},
        {"lr", m.cnn.lr},
        {"epochs", m.cnn.epochs},
        {"batch_size", m.cnn.batch_size}}},
      {"tree", {{"max_depth", m.tree.max_depth}, {"min_samples_split", m.tree.min_samples_split}}},
      {"forest",
       {{"n_trees", m.forest.n_trees},
        {"max_features", m.forest.max_features},
        {"bootstrap", m.forest.bootstrap},
        {"max_depth", m.forest.max_depth},
        {"min_samples_split", m.forest.min_samples_split}}},
      {"logreg", {{"lr", m.logreg.lr}, {"epochs", m.logreg.epochs}, {"l2", m.logreg.l2}}},
      {"mlp",
       {{"hidden", m.mlp.hidden},
        {"lr", m.mlp.lr},
        {"epochs", m.mlp.epochs},
        {"batch_size", m.mlp.batch_size}}},
  };
}

}  // namespace cadpipe::pipeline
