#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cadpipe/augment/autoencoder.h"
#include "cadpipe/models/registry.h"

namespace cadpipe::pipeline {

enum class LeakageMode { kPaperFaithful, kLeakageSafe };

// "paper_faithful" / "leakage_safe".
std::string_view to_string(LeakageMode m);
// Accepts both underscore and dash spellings. Throws ConfigError.
LeakageMode leakage_mode_from_string(std::string_view s);

struct PipelineConfig {
  // Paths as written in the file; resolved against base_dir.
  std::string raw_path;
  std::string schema_path;
  std::string output_dir = "out";
  std::filesystem::path base_dir;

  std::uint64_t seed = 42;
  std::vector<LeakageMode> modes{LeakageMode::kPaperFaithful};
  std::size_t threads = 1;

  std::size_t smote_m_neighbors = 5;
  std::size_t smote_k_neighbors = 5;
  bool smote_snap_discrete = false;

  std::size_t ae_hidden = 32;
  std::size_t ae_epochs = 200;
  std::size_t ae_batch_size = 32;
  double ae_lr = 0.001;
  std::optional<std::size_t> target_total;

  std::size_t cv_k = 10;
  bool cv_stratified = true;
  double threshold = 0.5;

  models::ModelSettings models;
  std::vector<std::string> enabled_models = models::model_names();

  std::filesystem::path raw() const { return base_dir / raw_path; }
  std::filesystem::path schema() const { return base_dir / schema_path; }
  std::filesystem::path output() const { return base_dir / output_dir; }

  augment::AutoencoderSpec autoencoder_spec(std::size_t input_dim, std::uint64_t seed) const;

  // Throws ConfigError.
  void validate() const;
};

// Flat sectioned key = value text; see data/README.md for every key.
// Unknown sections or keys are errors. Throws ConfigError.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

// Effective settings, paths as written. Stable key order.
nlohmann::json config_to_json(const PipelineConfig& cfg);

}  // namespace cadpipe::pipeline
