#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cadpipe/core/error.h"
#include "cadpipe/pipeline/config.h"

namespace cadpipe::pipeline {

// File names under the output directory.
namespace artifact {
inline constexpr const char* kClean = "dataset.clean.csv";
inline constexpr const char* kScaler = "scaler.json";
inline constexpr const char* kSummary = "summary.csv";
inline constexpr const char* kBalanced = "dataset.balanced.csv";
inline constexpr const char* kAugmented = "dataset.augmented.csv";
inline constexpr const char* kAutoencoder = "autoencoder.params";
inline constexpr const char* kMetrics = "metrics.json";
inline constexpr const char* kComparison = "comparison.csv";
inline constexpr const char* kFolds = "folds.csv";
inline constexpr const char* kReport = "report.txt";
inline constexpr const char* kManifest = "manifest.json";
inline constexpr const char* kTimings = "timings.json";
}  // namespace artifact

// A stage was asked for before the stage that produces its input.
class StageOrderError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Seeds for every random stream, all derived from the run seed.
struct StageSeeds {
  std::uint64_t smote = 0;
  std::uint64_t autoencoder = 0;
  std::uint64_t folds = 0;
  std::uint64_t models = 0;

  static StageSeeds derive(std::uint64_t seed);
  // Per-fold resampling and augmentation seeds for the leakage-safe order.
  StageSeeds for_fold(std::size_t fold) const;
};

// Runs pipeline stages against one output directory. Every stage writes
// its artifacts, then records digests, counts and the effective config in
// manifest.json. Wall-clock timings go to timings.json so that the
// manifest itself is reproducible byte for byte.
class Pipeline {
 public:
  Pipeline(PipelineConfig cfg, std::ostream& log);

  const PipelineConfig& config() const { return cfg_; }

  // clean -> scale (fit on the cleaned originals)
  void ingest();
  // Borderline-SMOTE on the scaled clean data
  void balance();
  // autoencoder reconstructions appended to the balanced data
  void augment();
  // every enabled model over one fold plan per configured mode
  void evaluate();
  // comparison.csv, folds.csv and report.txt from metrics.json
  void report();

  // All five stages in order, starting from an empty manifest.
  void run_all();

  std::filesystem::path output_path(const char* name) const { return cfg_.output() / name; }

 private:
  nlohmann::json run_mode(LeakageMode mode);
  nlohmann::json& stage_entry(const std::string& stage);
  // Reads an artifact and checks it against the digest `stage` recorded.
  std::string read_verified(const char* name, const std::string& stage);
  void write_artifact(const char* name, const std::string& content, nlohmann::json& outputs);
  void save_manifest();
  void record_timing(const std::string& stage, double seconds);
  void log(const std::string& line);

  PipelineConfig cfg_;
  StageSeeds seeds_;
  std::ostream& log_;
  nlohmann::json manifest_;
};

}  // namespace cadpipe::pipeline
