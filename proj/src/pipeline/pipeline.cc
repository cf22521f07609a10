#include "cadpipe/pipeline/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <ostream>

#include "cadpipe/augment/autoencoder.h"
#include "cadpipe/core/dataset_io.h"
#include "cadpipe/core/parallel.h"
#include "cadpipe/core/prng.h"
#include "cadpipe/eval/report.h"
#include "cadpipe/ingest/cleaning.h"
#include "cadpipe/ingest/encode.h"
#include "cadpipe/ingest/scaler.h"
#include "cadpipe/ingest/schema.h"
#include "cadpipe/ingest/summary.h"
#include "cadpipe/nn/serialize.h"
#include "cadpipe/pipeline/digest.h"
#include "cadpipe/pipeline/published.h"
#include "cadpipe/resample/smote.h"

#ifndef CADPIPE_VERSION
#define CADPIPE_VERSION "unknown"
#endif

namespace cadpipe::pipeline {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string> kStageOrder{"ingest", "balance", "augment", "evaluate", "report"};

json counts_json(const ClassCounts& c) {
  return {{"positive", c.positive}, {"negative", c.negative}, {"total", c.total()}};
}

json provenance_json(const std::vector<Provenance>& p) {
  json out = json::object();
  for (Provenance tag : {Provenance::kOriginal, Provenance::kSyntheticSmote, Provenance::kReconstruction}) {
    out[std::string(to_string(tag))] = std::count(p.begin(), p.end(), tag);
  }
  return out;
}

void expect_counts(const Dataset& ds, const json& recorded, const std::string& what) {
  const ClassCounts c = ds.class_counts();
  if (recorded.at("positive").get<std::size_t>() != c.positive ||
      recorded.at("negative").get<std::size_t>() != c.negative) {
    throw IntegrityError(what + " has class counts " + counts_json(c).dump() +
                         " but the manifest recorded " + recorded.dump());
  }
}

std::string scaler_to_json(const ingest::ScalingParams& p, const std::vector<std::string>& names) {
  json features = json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    features.push_back({{"name", names[i]}, {"min", p.min[i]}, {"max", p.max[i]}});
  }
  return json{{"method", "min-max"}, {"fit_on", "cleaned original rows"}, {"features", features}}
             .dump(2) +
         "\n";
}

ingest::ScalingParams scaler_from_json(const std::string& text, const Dataset& ds) {
  ingest::ScalingParams p;
  try {
    const json j = json::parse(text);
    for (const json& f : j.at("features")) {
      p.min.push_back(f.at("min").get<double>());
      p.max.push_back(f.at("max").get<double>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string(artifact::kScaler) + ": " + e.what());
  }
  if (p.size() != ds.n_features()) {
    throw IntegrityError(std::string(artifact::kScaler) + " has " + std::to_string(p.size()) +
                         " features, the clean dataset " + std::to_string(ds.n_features()));
  }
  return p;
}

AugmentedDataset tag_smote_output(const resample::SmoteResult& r) {
  AugmentedDataset out{r.dataset, std::vector<Provenance>(r.dataset.n_samples(), Provenance::kSyntheticSmote)};
  std::fill_n(out.provenance.begin(), r.n_original, Provenance::kOriginal);
  return out;
}

json partition_json(const resample::SmoteResult& r) {
  return {{"minority", r.partition.minority == Label::kPositive ? "positive" : "negative"},
          {"minority_rows", r.partition.minority_rows.size()},
          {"safe", r.partition.safe.size()},
          {"danger", r.partition.danger.size()},
          {"noise", r.partition.noise.size()},
          {"synthetic", r.synthesis.size()},
          {"warnings", r.warnings}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

StageSeeds StageSeeds::derive(std::uint64_t seed) {
  const Prng root(seed);
  return {root.derive(1).next_u64(), root.derive(2).next_u64(), root.derive(3).next_u64(),
          root.derive(4).next_u64()};
}

StageSeeds StageSeeds::for_fold(std::size_t fold) const {
  const auto f = static_cast<std::uint64_t>(fold);
  return {Prng(smote).derive(f).next_u64(), Prng(autoencoder).derive(f).next_u64(), folds, models};
}

Pipeline::Pipeline(PipelineConfig cfg, std::ostream& log)
    : cfg_(std::move(cfg)), seeds_(StageSeeds::derive(cfg_.seed)), log_(log) {
  cfg_.validate();
  const fs::path path = output_path(artifact::kManifest);
  manifest_ = json::object();
  if (fs::exists(path)) {
    try {
      manifest_ = json::parse(ingest::read_text_file(path));
    } catch (const json::exception& e) {
      throw IntegrityError(path.string() + " is not valid JSON: " + e.what());
    }
  }
  if (!manifest_.contains("stages")) manifest_["stages"] = json::object();
}

void Pipeline::log(const std::string& line) { log_ << line << '\n' << std::flush; }

json& Pipeline::stage_entry(const std::string& stage) {
  json& stages = manifest_["stages"];
  const auto pos = std::find(kStageOrder.begin(), kStageOrder.end(), stage);
  for (auto it = pos; it != kStageOrder.end(); ++it) stages.erase(*it);
  stages[stage] = json::object();
  return stages[stage];
}

std::string Pipeline::read_verified(const char* name, const std::string& stage) {
  const fs::path path = output_path(name);
  if (!fs::exists(path)) {
    throw StageOrderError(std::string(name) + " not found in " + cfg_.output().string() + "; run `" +
                          stage + "` first");
  }
  const json& stages = manifest_["stages"];
  if (!stages.contains(stage) || !stages[stage].contains("outputs") ||
      !stages[stage]["outputs"].contains(name)) {
    throw StageOrderError("the manifest has no record of `" + stage + "` producing " + name +
                          "; run `" + stage + "` first");
  }
  std::string text = ingest::read_text_file(path);
  if (sha256_hex(text) != stages[stage]["outputs"][name].get<std::string>()) {
    throw IntegrityError(std::string(name) + " does not match the digest recorded by `" + stage +
                         "`; rerun `" + stage + "`");
  }
  return text;
}

void Pipeline::write_artifact(const char* name, const std::string& content, json& outputs) {
  write_text_file(output_path(name), content);
  outputs[name] = sha256_hex(content);
}

void Pipeline::save_manifest() {
  manifest_["tool"] = {{"name", "cadpipe"}, {"version", CADPIPE_VERSION}};
  manifest_["config"] = config_to_json(cfg_);
  manifest_["prng"] = Prng::kAlgorithm;
  manifest_["seeds"] = {{"smote", seeds_.smote},
                        {"autoencoder", seeds_.autoencoder},
                        {"folds", seeds_.folds},
                        {"models", seeds_.models}};
  manifest_["scaling"] = "min-max, fit on the cleaned original rows before oversampling";
  write_text_file(output_path(artifact::kManifest), manifest_.dump(2) + "\n");
}

void Pipeline::record_timing(const std::string& stage, double seconds) {
  const fs::path path = output_path(artifact::kTimings);
  json t = json::object();
  if (fs::exists(path)) {
    try {
      t = json::parse(ingest::read_text_file(path));
    } catch (const json::exception&) {
      t = json::object();
    }
  }
  t[stage] = seconds;
  write_text_file(path, t.dump(2) + "\n");
}

void Pipeline::ingest() {
  const auto start = std::chrono::steady_clock::now();
  if (!fs::exists(cfg_.raw())) throw DataError("raw data file not found: " + cfg_.raw().string());
  if (!fs::exists(cfg_.schema())) throw ConfigError("schema file not found: " + cfg_.schema().string());
  const ingest::DatasetSchema schema = ingest::load_schema(cfg_.schema());
  const ingest::RawTable table = ingest::read_csv_file(cfg_.raw());
  ingest::check_columns_declared(table, schema);

  const ingest::RawTable kept = ingest::drop_columns(table, schema.ignored_columns);
  const ingest::CleaningResult cleaned = ingest::remove_constant_columns(kept, schema.label_name);
  Dataset ds = ingest::encode(cleaned.table, schema);
  ds.validate();
  const ClassCounts counts = ds.class_counts();
  if (counts.positive == 0 || counts.negative == 0) {
    throw DataError("ingest: the data holds a single class (" + counts_json(counts).dump() + ")");
  }
  const ingest::ScalingParams params = ingest::fit_scaler(ds);

  json& entry = stage_entry("ingest");
  entry["inputs"] = {{"raw", {{"path", cfg_.raw_path}, {"sha256", file_sha256(cfg_.raw())}}},
                     {"schema", {{"path", cfg_.schema_path}, {"sha256", file_sha256(cfg_.schema())}}}};
  json outputs = json::object();
  write_artifact(artifact::kClean, dataset_to_csv(ds), outputs);
  write_artifact(artifact::kScaler, scaler_to_json(params, ds.feature_names), outputs);
  write_artifact(artifact::kSummary, ingest::summary_to_csv(ingest::summarize(ds)), outputs);
  entry["outputs"] = outputs;
  entry["rows"] = ds.n_samples();
  entry["raw_columns"] = table.header.size();
  entry["predictors_before_cleaning"] = kept.header.size() - 1;
  entry["features"] = ds.n_features();
  entry["class_counts"] = counts_json(counts);
  entry["removed"] = cleaned.removed;
  entry["ignored"] = schema.ignored_columns;
  entry["warnings"] = cleaned.warnings;
  save_manifest();
  record_timing("ingest", seconds_since(start));

  std::string removed;
  for (const auto& r : cleaned.removed) removed += (removed.empty() ? "" : ", ") + r;
  log("[ingest] " + std::to_string(ds.n_samples()) + " rows, " + std::to_string(ds.n_features()) +
      " predictors after cleaning (removed: " + (removed.empty() ? "none" : removed) + "); " +
      std::to_string(counts.positive) + " positive / " + std::to_string(counts.negative) + " negative");
  for (const auto& w : cleaned.warnings) log("[ingest] warning: " + w);
}

namespace {

resample::SmoteConfig smote_config(const PipelineConfig& cfg, const Dataset& ds, std::uint64_t seed) {
  resample::SmoteConfig sc;
  sc.m_neighbors = cfg.smote_m_neighbors;
  sc.k_neighbors = cfg.smote_k_neighbors;
  sc.seed = seed;
  if (cfg.smote_snap_discrete) {
    const ingest::DatasetSchema schema = ingest::load_schema(cfg.schema());
    for (std::size_t i = 0; i < ds.n_features(); ++i) {
      const auto* spec = schema.find(ds.feature_names[i]);
      if (spec && spec->kind != ingest::FeatureKind::kNumeric) sc.snap_columns.push_back(i);
    }
  }
  return sc;
}

}  // namespace

void Pipeline::balance() {
  const auto start = std::chrono::steady_clock::now();
  const Dataset clean = dataset_from_csv(read_verified(artifact::kClean, "ingest"));
  expect_counts(clean, manifest_["stages"]["ingest"]["class_counts"], artifact::kClean);
  const auto params = scaler_from_json(read_verified(artifact::kScaler, "ingest"), clean);
  const Dataset scaled = ingest::apply_scaler(clean, params);

  const auto result = resample::borderline_smote_traced(scaled, smote_config(cfg_, scaled, seeds_.smote));
  const AugmentedDataset balanced = tag_smote_output(result);

  json& entry = stage_entry("balance");
  json outputs = json::object();
  write_artifact(artifact::kBalanced, dataset_to_csv(balanced), outputs);
  entry["outputs"] = outputs;
  entry["rows"] = balanced.dataset.n_samples();
  entry["class_counts"] = counts_json(balanced.dataset.class_counts());
  entry["provenance"] = provenance_json(balanced.provenance);
  entry["partition"] = partition_json(result);
  save_manifest();
  record_timing("balance", seconds_since(start));

  const ClassCounts c = balanced.dataset.class_counts();
  log("[balance] " + std::to_string(c.positive) + " positive / " + std::to_string(c.negative) +
      " negative = " + std::to_string(c.total()) + " rows (" + std::to_string(result.synthesis.size()) +
      " synthetic; danger set " + std::to_string(result.partition.danger.size()) + ")");
  for (const auto& w : result.warnings) log("[balance] warning: " + w);
}

void Pipeline::augment() {
  const auto start = std::chrono::steady_clock::now();
  const AugmentedDataset balanced = augmented_from_csv(read_verified(artifact::kBalanced, "balance"));
  expect_counts(balanced.dataset, manifest_["stages"]["balance"]["class_counts"], artifact::kBalanced);

  const auto spec = cfg_.autoencoder_spec(balanced.dataset.n_features(), seeds_.autoencoder);
  const augment::Autoencoder ae = augment::train_autoencoder(balanced.dataset, spec);
  const AugmentedDataset out = augment::augment(balanced, ae, cfg_.target_total);

  json& entry = stage_entry("augment");
  json outputs = json::object();
  write_artifact(artifact::kAugmented, dataset_to_csv(out), outputs);
  write_artifact(artifact::kAutoencoder, nn::save_network(ae.network), outputs);
  entry["outputs"] = outputs;
  entry["rows"] = out.dataset.n_samples();
  entry["class_counts"] = counts_json(out.dataset.class_counts());
  entry["provenance"] = provenance_json(out.provenance);
  entry["target_total"] = cfg_.target_total ? json(*cfg_.target_total) : json(nullptr);
  entry["reconstruction_mse"] = ae.final_mse;
  save_manifest();
  record_timing("augment", seconds_since(start));

  log("[augment] " + std::to_string(out.dataset.n_samples()) + " rows (" +
      std::to_string(out.dataset.n_samples() - balanced.dataset.n_samples()) +
      " reconstructions, training MSE " + format_double(ae.final_mse) + ")");
}

json Pipeline::run_mode(LeakageMode mode) {
  const std::string mode_name(to_string(mode));
  std::vector<eval::FoldData> folds;
  json fold_info = json::array();
  eval::FoldPlan plan;
  std::size_t evaluated_rows = 0;

  if (mode == LeakageMode::kPaperFaithful) {
    const AugmentedDataset data = augmented_from_csv(read_verified(artifact::kAugmented, "augment"));
    expect_counts(data.dataset, manifest_["stages"]["augment"]["class_counts"], artifact::kAugmented);
    const Dataset& ds = data.dataset;
    evaluated_rows = ds.n_samples();
    plan = cfg_.cv_stratified ? eval::stratified_kfold_split(ds.labels, cfg_.cv_k, seeds_.folds)
                              : eval::kfold_split(ds.n_samples(), cfg_.cv_k, seeds_.folds);
    folds = eval::materialize_folds(ds, plan);
    for (std::size_t f = 0; f < plan.k; ++f) {
      std::vector<Provenance> test_tags;
      for (std::size_t i : plan.folds[f]) test_tags.push_back(data.provenance[i]);
      fold_info.push_back({{"fold", f},
                           {"train_rows", folds[f].train.n_samples()},
                           {"test_rows", folds[f].test.n_samples()},
                           {"test_provenance", provenance_json(test_tags)}});
    }
  } else {
    const Dataset clean = dataset_from_csv(read_verified(artifact::kClean, "ingest"));
    expect_counts(clean, manifest_["stages"]["ingest"]["class_counts"], artifact::kClean);
    const Dataset scaled =
        ingest::apply_scaler(clean, scaler_from_json(read_verified(artifact::kScaler, "ingest"), clean));
    evaluated_rows = scaled.n_samples();
    plan = cfg_.cv_stratified ? eval::stratified_kfold_split(scaled.labels, cfg_.cv_k, seeds_.folds)
                              : eval::kfold_split(scaled.n_samples(), cfg_.cv_k, seeds_.folds);
    plan.check_partition(scaled.n_samples());
    folds.resize(plan.k);
    std::vector<json> info(plan.k);
    std::mutex log_mu;
    parallel_for(plan.k, cfg_.threads, [&](std::size_t f) {
      const StageSeeds fs = seeds_.for_fold(f);
      const Dataset train = scaled.subset(plan.train_indices(f));
      const auto smote = resample::borderline_smote_traced(train, smote_config(cfg_, train, fs.smote));
      const AugmentedDataset balanced = tag_smote_output(smote);
      const auto ae = augment::train_autoencoder(
          balanced.dataset, cfg_.autoencoder_spec(train.n_features(), fs.autoencoder));
      const AugmentedDataset augmented = augment::augment(balanced, ae);
      // Test rows are drawn from the scaled originals only.
      const std::vector<Provenance> test_tags(plan.folds[f].size(), Provenance::kOriginal);
      folds[f] = {augmented.dataset, scaled.subset(plan.folds[f])};
      info[f] = {{"fold", f},
                 {"train_original_rows", train.n_samples()},
                 {"train_rows", augmented.dataset.n_samples()},
                 {"train_provenance", provenance_json(augmented.provenance)},
                 {"test_rows", plan.folds[f].size()},
                 {"test_provenance", provenance_json(test_tags)},
                 {"reconstruction_mse", ae.final_mse}};
      std::lock_guard lock(log_mu);
      log("[evaluate] " + mode_name + " fold " + std::to_string(f) + ": training set " +
          std::to_string(train.n_samples()) + " -> " + std::to_string(augmented.dataset.n_samples()) +
          " rows after SMOTE and augmentation");
    });
    for (auto& i : info) fold_info.push_back(std::move(i));
  }

  json fold_sizes = json::array();
  for (const auto& f : plan.folds) fold_sizes.push_back(f.size());

  json model_reports = json::array();
  std::mutex log_mu;
  for (const std::string& name : cfg_.enabled_models) {
    eval::EvalOptions opts;
    opts.seed = seeds_.models;
    opts.threads = cfg_.threads;
    opts.threshold = cfg_.threshold;
    opts.on_fold = [&](const eval::FoldResult& r) {
      std::lock_guard lock(log_mu);
      log("[evaluate] " + mode_name + " " + name + " fold " + std::to_string(r.fold) + ": accuracy " +
          eval::percent(r.positive.accuracy) + ", ROC AUC " + eval::percent(r.roc_auc));
    };
    const eval::MetricsReport report =
        eval::evaluate_folds(name, models::make_factory(name, cfg_.models), folds, opts);
    log("[evaluate] " + mode_name + " " + name + " mean: accuracy " + eval::percent(report.mean.accuracy) +
        ", ROC AUC " + eval::percent(report.mean.roc_auc));
    model_reports.push_back(eval::report_to_json(report));
  }
  return {{"mode", mode_name},
          {"evaluated_rows", evaluated_rows},
          {"fold_sizes", fold_sizes},
          {"folds", fold_info},
          {"models", model_reports}};
}

void Pipeline::evaluate() {
  const auto start = std::chrono::steady_clock::now();
  json runs = json::array();
  for (LeakageMode mode : cfg_.modes) runs.push_back(run_mode(mode));

  const std::size_t features = manifest_["stages"]["ingest"]["features"].get<std::size_t>();
  const nn::NetworkSpec cnn = models::build_cnn(cfg_.models.cnn, features);
  Prng init(0);
  const json metrics = {
      {"k", cfg_.cv_k},
      {"stratified", cfg_.cv_stratified},
      {"threshold", cfg_.threshold},
      {"seed", cfg_.seed},
      {"metric_scope",
       {{"positive_class", "label 1 (CAD) treated as positive"},
        {"macro", "unweighted mean of the per-class recall, precision and F1"}}},
      {"cnn_architecture",
       {{"main_layers", models::main_layer_count(cnn)},
        {"parameters", nn::Network::initialize(cnn, init).parameter_count()}}},
      {"runs", runs}};

  json& entry = stage_entry("evaluate");
  json outputs = json::object();
  write_artifact(artifact::kMetrics, metrics.dump(2) + "\n", outputs);
  entry["outputs"] = outputs;
  json modes = json::array();
  for (LeakageMode mode : cfg_.modes) modes.push_back(to_string(mode));
  entry["modes"] = modes;
  entry["models"] = cfg_.enabled_models;
  save_manifest();
  record_timing("evaluate", seconds_since(start));
}

void Pipeline::report() {
  const auto start = std::chrono::steady_clock::now();
  json metrics;
  try {
    metrics = json::parse(read_verified(artifact::kMetrics, "evaluate"));
  } catch (const json::exception& e) {
    throw ParseError(std::string(artifact::kMetrics) + ": " + e.what());
  }

  std::string comparison = "mode,model,name,recall,precision,f1,accuracy,roc_auc\n";
  std::string folds = eval::folds_csv_header();
  std::string text;
  for (const json& run : metrics.at("runs")) {
    const std::string mode = run.at("mode").get<std::string>();
    std::vector<eval::MetricsReport> reports;
    for (const json& m : run.at("models")) reports.push_back(eval::report_from_json(m));
    for (const auto& r : reports) {
      comparison += mode + "," + r.model + "," + std::string(models::display_name(r.model)) + "," +
                    eval::percent(r.mean.recall) + "," + eval::percent(r.mean.precision) + "," +
                    eval::percent(r.mean.f1) + "," + eval::percent(r.mean.accuracy) + "," +
                    eval::percent(r.mean.roc_auc) + "\n";
    }
    folds += eval::folds_csv_rows(reports, mode);
    text += "mode: " + mode + " (" + std::to_string(run.at("evaluated_rows").get<std::size_t>()) +
            " rows, " + std::to_string(run.at("fold_sizes").size()) + " folds; positive class = CAD)\n";
    text += eval::format_table(reports) + "\n";
  }

  char buf[160];
  text += "published reference (percent; SVM has no local implementation)\n";
  std::snprintf(buf, sizeof buf, "  %-32s %7s %9s %8s %8s %7s\n", "Model", "Recall", "Precision",
                "F1 Score", "Accuracy", "ROC AUC");
  text += buf;
  for (const PublishedRow& p : kPublishedResults) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f,%.2f,%.2f,%.2f", p.recall, p.precision, p.f1,
                  p.accuracy, p.roc_auc);
    comparison += "published," + std::string(p.model) + "," + std::string(p.name) + "," + buf + "\n";
    std::snprintf(buf, sizeof buf, "  %-32s %7.2f %9.2f %8.2f %8.2f %7.2f\n", std::string(p.name).c_str(),
                  p.recall, p.precision, p.f1, p.accuracy, p.roc_auc);
    text += buf;
  }
  const json& arch = metrics.at("cnn_architecture");
  text += "\nCNN: " + std::to_string(arch.at("main_layers").get<std::size_t>()) +
          " main layers (conv + dense), " + std::to_string(arch.at("parameters").get<std::size_t>()) +
          " parameters\n";

  json& entry = stage_entry("report");
  json outputs = json::object();
  write_artifact(artifact::kComparison, comparison, outputs);
  write_artifact(artifact::kFolds, folds, outputs);
  write_artifact(artifact::kReport, text, outputs);
  entry["outputs"] = outputs;
  save_manifest();
  record_timing("report", seconds_since(start));
  log_ << text << std::flush;
}

void Pipeline::run_all() {
  manifest_ = {{"stages", json::object()}};
  fs::remove(output_path(artifact::kTimings));
  ingest();
  balance();
  augment();
  evaluate();
  report();
}

}  // namespace cadpipe::pipeline
