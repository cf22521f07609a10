// One line per criterion: PASS, FAIL or SKIP followed by the measured values.
// Exit status is 0 when everything selected passed, 1 on any failure and 77
// when every selected criterion was skipped.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cadpipe/core/dataset_io.h"
#include "cadpipe/core/error.h"
#include "cadpipe/core/prng.h"
#include "cadpipe/eval/metrics.h"
#include "cadpipe/eval/report.h"
#include "cadpipe/ingest/csv.h"
#include "cadpipe/pipeline/digest.h"
#include "cadpipe/pipeline/pipeline.h"
#include "cadpipe/resample/knn.h"
#include "cadpipe/resample/smote.h"
#include "gradcases.h"
#include "oracles.h"

namespace {

namespace fs = std::filesystem;
using namespace cadpipe;
using nlohmann::json;

enum class Outcome { kPass, kFail, kSkip };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

Verdict pass(std::string d) { return {Outcome::kPass, std::move(d)}; }
Verdict fail(std::string d) { return {Outcome::kFail, std::move(d)}; }
Verdict skip(std::string d) { return {Outcome::kSkip, std::move(d)}; }

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

const fs::path kSource = CADPIPE_SOURCE_DIR;
const fs::path kSchema = kSource / "data" / "z_alizadeh_sani_extension.schema.json";
const fs::path kSurrogate = kSource / "data" / "surrogate.csv";

std::optional<fs::path> real_dataset() {
  const char* env = std::getenv("CADPIPE_DATASET");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return fs::absolute(env);
}

std::size_t worker_threads() {
  if (const char* env = std::getenv("CADPIPE_THREADS")) return std::max(1, std::atoi(env));
  return std::max(1u, std::thread::hardware_concurrency());
}

fs::path work_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cadpipe_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Small models so a full run-all finishes in seconds.
std::string quick_config(const fs::path& out, const std::string& mode) {
  return "[paths]\nraw = " + kSurrogate.string() + "\nschema = " + kSchema.string() +
         "\noutput = " + out.string() + "\n[run]\nseed = 11\nleakage_mode = " + mode +
         "\n[autoencoder]\nepochs = 10\ntarget_total = 826\n[cv]\nk = 5\n"
         "[cnn]\nconv_filters = 4, 4, 4, 4\ndense_units = 16, 8, 8, 8, 2\nepochs = 4\nbatch_size = 64\n"
         "[forest]\nn_trees = 10\n[mlp]\nepochs = 10\n";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CADPIPE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---------------------------------------------------------------------------

Verdict stage_counts() {
  const auto real = real_dataset();
  const fs::path dir = work_dir("stages");
  std::ostringstream log;
  auto cfg = pipeline::parse_config(quick_config(dir / "out", "paper_faithful"), dir);
  if (real) cfg.raw_path = real->string();
  cfg.ae_epochs = 200;
  pipeline::Pipeline p(cfg, log);
  p.ingest();
  p.balance();
  p.augment();
  const json m = json::parse(ingest::read_text_file(p.output_path(pipeline::artifact::kManifest)));
  const json& s = m.at("stages");
  const std::size_t rows = s["ingest"]["rows"], features = s["ingest"]["features"];
  const json removed = s["ingest"]["removed"];
  const std::size_t pos = s["balance"]["class_counts"]["positive"];
  const std::size_t neg = s["balance"]["class_counts"]["negative"];
  const std::size_t total = s["augment"]["rows"];
  std::ostringstream d;
  d << "ingest " << rows << " rows / " << features << " predictors, removed " << removed.dump()
    << "; balance " << pos << "/" << neg << "; augment " << total;
  d << (real ? " [" + real->filename().string() + "]" : " [surrogate data; set CADPIPE_DATASET for the real file]");
  fs::remove_all(dir);
  const bool ok = rows == 303 && features == 57 && removed == json({"Exertional CP"}) && pos == 216 &&
                  neg == 216 && total == 826;
  return ok ? pass(d.str()) : fail(d.str());
}

// Runs the full-size CNN configuration on the real data for one seed and
// returns the per-model reports for paper_faithful mode.
std::vector<eval::MetricsReport> paper_run(const fs::path& data, std::uint64_t seed,
                                           std::vector<std::string> models, const std::string& tag) {
  const fs::path dir = work_dir(tag + "_" + std::to_string(seed));
  auto cfg = pipeline::load_config(kSource / "configs" / "paper.ini");
  cfg.raw_path = data.string();
  cfg.schema_path = kSchema.string();
  cfg.output_dir = (dir / "out").string();
  cfg.seed = seed;
  cfg.modes = {pipeline::LeakageMode::kPaperFaithful};
  cfg.enabled_models = std::move(models);
  cfg.threads = worker_threads();
  pipeline::Pipeline p(cfg, std::cerr);
  p.ingest();
  p.balance();
  p.augment();
  p.evaluate();
  const json m = json::parse(ingest::read_text_file(p.output_path(pipeline::artifact::kMetrics)));
  std::vector<eval::MetricsReport> out;
  for (const json& r : m.at("runs").at(0).at("models")) out.push_back(eval::report_from_json(r));
  fs::remove_all(dir);
  return out;
}

Verdict cnn_accuracy_band() {
  const auto real = real_dataset();
  if (!real) return skip("needs the real dataset (set CADPIPE_DATASET)");
  bool ok = true;
  std::ostringstream d;
  for (std::uint64_t seed : {42u, 1234u, 2024u}) {
    const auto reports = paper_run(*real, seed, {"cnn"}, "band");
    const auto& mean = reports.at(0).mean;
    const double acc = 100.0 * mean.accuracy;
    ok = ok && acc >= 92.0 && acc <= 98.5 && mean.roc_auc >= 0.92;
    d << "seed " << seed << ": accuracy " << fmt(acc) << "%, auc " << fmt(mean.roc_auc) << "; ";
  }
  d << "band [92.0, 98.5], auc >= 0.92";
  return ok ? pass(d.str()) : fail(d.str());
}

Verdict baseline_ordering() {
  const auto real = real_dataset();
  if (!real) return skip("needs the real dataset (set CADPIPE_DATASET)");
  const auto reports = paper_run(*real, 42, models::model_names(), "ordering");
  double cnn = -1;
  for (const auto& r : reports) {
    if (r.model == "cnn") cnn = 100.0 * r.mean.accuracy;
  }
  bool ok = true;
  std::ostringstream d;
  d << "cnn " << fmt(cnn) << "%";
  for (const auto& r : reports) {
    if (r.model == "cnn") continue;
    const double acc = 100.0 * r.mean.accuracy;
    ok = ok && cnn >= acc - 1.0;
    d << ", " << r.model << " " << fmt(acc) << "%";
  }
  return ok ? pass(d.str()) : fail(d.str());
}

Verdict gradients() {
  double worst = 0.0;
  std::string worst_kind;
  std::size_t cases = 0;
  for (const auto& kind : testing::gradcheck_kinds()) {
    Prng rng = Prng(20240611).derive(std::hash<std::string>{}(kind));
    for (int i = 0; i < 100; ++i, ++cases) {
      auto c = testing::make_grad_case(kind, rng);
      const double err = testing::max_gradient_error(c.net, c.x, c.y, c.mask_seed, 1e-5);
      if (err > worst) {
        worst = err;
        worst_kind = kind;
      }
    }
  }
  const std::string d = std::to_string(cases) + " cases over dense/conv1d/dropout/bce/mse/l2, max relative error " +
                        fmt(worst) + " (" + worst_kind + "), limit 1e-4";
  return worst < 1e-4 ? pass(d) : fail(d);
}

Verdict auc_oracle() {
  Prng rng(777);
  std::size_t mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.uniform_index(499);
    // Coarse score grids produce many ties.
    const std::size_t levels = rng.bernoulli(0.5) ? 2 + rng.uniform_index(10) : 0;
    std::vector<double> scores(n);
    std::vector<Label> labels(n);
    std::vector<int> positive(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = levels ? static_cast<double>(rng.uniform_index(levels)) / levels : rng.uniform();
      positive[i] = rng.bernoulli(0.3 + 0.4 * rng.uniform()) ? 1 : 0;
    }
    positive[0] = 1;
    positive[1] = 0;
    for (std::size_t i = 0; i < n; ++i) labels[i] = positive[i] ? Label::kPositive : Label::kNegative;
    if (eval::roc_auc(scores, labels) != oracle::auc_pairwise(scores, positive)) ++mismatches;
  }
  const std::string d = "1000 instances up to 500 samples, " + std::to_string(mismatches) + " mismatches";
  return mismatches == 0 ? pass(d) : fail(d);
}

Verdict knn_oracle() {
  Prng rng(778);
  std::size_t mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.uniform_index(199);
    const std::size_t dim = 1 + rng.uniform_index(6);
    const bool lattice = rng.bernoulli(0.5);  // integer points, many equal distances
    std::vector<std::vector<double>> refs(n, std::vector<double>(dim));
    Matrix m(n, dim);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        refs[i][j] = lattice ? static_cast<double>(rng.uniform_index(4)) : rng.uniform(-1, 1);
        m(i, j) = refs[i][j];
      }
    }
    std::optional<std::size_t> exclude;
    std::vector<double> query(dim);
    if (rng.bernoulli(0.5)) {
      exclude = rng.uniform_index(n);
      query = refs[*exclude];
    } else {
      for (double& v : query) v = lattice ? static_cast<double>(rng.uniform_index(4)) : rng.uniform(-1, 1);
    }
    const std::size_t k = 1 + rng.uniform_index(n - (exclude ? 1 : 0));
    const resample::NeighborIndex index(m);
    if (resample::knn_query(index, query, k, exclude) != oracle::knn_exhaustive(refs, query, k, exclude)) {
      ++mismatches;
    }
  }
  const std::string d = "1000 instances up to 200 points, " + std::to_string(mismatches) + " mismatches";
  return mismatches == 0 ? pass(d) : fail(d);
}

// Recomputes the danger set and the synthesis stream from scratch with the
// exhaustive neighbor oracle, then compares every synthetic row bit for bit.
Verdict smote_geometry() {
  Prng rng(779);
  std::size_t instances = 0, synthetic = 0, problems = 0;
  std::string first_problem;
  auto problem = [&](const std::string& what) {
    if (problems++ == 0) first_problem = what;
  };
  for (int t = 0; t < 200; ++t) {
    const std::size_t n_major = 12 + rng.uniform_index(40);
    const std::size_t n_minor = 3 + rng.uniform_index(n_major - 4);
    const std::size_t dim = 1 + rng.uniform_index(5);
    const Label minority = rng.bernoulli(0.5) ? Label::kPositive : Label::kNegative;
    Dataset ds;
    for (std::size_t c = 0; c < dim; ++c) ds.feature_names.push_back("f" + std::to_string(c));
    std::vector<std::vector<double>> rows;
    const std::size_t n = n_major + n_minor;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i = 0; i < n; ++i) {
      const bool is_minor = order[i] < n_minor;
      std::vector<double> row(dim);
      for (double& v : row) v = rng.uniform() + (is_minor ? 0.4 : 0.0);
      ds.features.append_row(row);
      ds.labels.push_back(is_minor ? minority : other(minority));
      rows.push_back(row);
    }
    resample::SmoteConfig cfg;
    cfg.m_neighbors = 1 + rng.uniform_index(7);
    cfg.k_neighbors = 1 + rng.uniform_index(6);
    cfg.seed = rng.next_u64();
    const auto result = resample::borderline_smote_traced(ds, cfg);
    ++instances;

    std::vector<std::size_t> minority_rows;
    std::vector<std::vector<double>> minority_points;
    std::vector<std::size_t> danger;
    for (std::size_t i = 0; i < n; ++i) {
      if (ds.labels[i] != minority) continue;
      const auto nn = oracle::knn_exhaustive(rows, rows[i], cfg.m_neighbors, i);
      const auto majority = static_cast<std::size_t>(
          std::count_if(nn.begin(), nn.end(), [&](std::size_t j) { return ds.labels[j] != minority; }));
      if (2 * majority >= cfg.m_neighbors && majority < cfg.m_neighbors) danger.push_back(minority_rows.size());
      minority_rows.push_back(i);
      minority_points.push_back(rows[i]);
    }
    if (danger.empty()) {
      for (std::size_t i = 0; i < n_minor; ++i) danger.push_back(i);
    }
    const std::size_t k = std::min(cfg.k_neighbors, n_minor - 1);
    Prng stream(cfg.seed);
    const std::size_t deficit = n_major - n_minor;
    if (result.dataset.n_samples() != 2 * n_major || result.synthesis.size() != deficit) {
      problem("counts");
      continue;
    }
    const auto counts = result.dataset.class_counts();
    if (counts.positive != counts.negative) problem("unequal classes");
    for (std::size_t j = 0; j < deficit; ++j) {
      const std::size_t p = danger[j % danger.size()];
      const auto nbrs = oracle::knn_exhaustive(minority_points, minority_points[p], k, p);
      const std::size_t q = nbrs[stream.uniform_index(k)];
      const double r = stream.uniform();
      if (!(r >= 0.0 && r < 1.0)) problem("r out of range");
      const auto got = result.dataset.features.row(n + j);
      for (std::size_t c = 0; c < dim; ++c) {
        const double want = minority_points[p][c] + r * (minority_points[q][c] - minority_points[p][c]);
        if (got[c] != want) problem("row " + std::to_string(n + j) + " differs from p + r(q - p)");
      }
      if (result.dataset.labels[n + j] != minority) problem("synthetic label");
      const auto& rec = result.synthesis[j];
      if (rec.p_row != minority_rows[p] || rec.q_row != minority_rows[q] || rec.r != r) problem("trace");
      ++synthetic;
    }
    cfg.seed ^= 0x5555;
    if (resample::borderline_smote(result.dataset, cfg) != result.dataset) problem("not idempotent");
  }
  std::string d = std::to_string(instances) + " datasets, " + std::to_string(synthetic) +
                  " synthetic rows replayed from the seeded stream; equal counts; rebalancing a balanced set is a no-op";
  if (problems) d += "; " + std::to_string(problems) + " problems, first: " + first_problem;
  return problems == 0 ? pass(d) : fail(d);
}

Verdict determinism() {
  const fs::path dir = work_dir("determinism");
  write_text_file(dir / "run.ini", quick_config(dir / "out", "both"));
  std::vector<std::string> digests;
  for (int i = 0; i < 2; ++i) {
    if (run_cli("run-all --quiet --config " + (dir / "run.ini").string()) != 0) {
      return fail("run-all exited non-zero");
    }
    digests.push_back(pipeline::file_sha256(dir / "out" / pipeline::artifact::kMetrics));
    digests.push_back(pipeline::file_sha256(dir / "out" / pipeline::artifact::kManifest));
  }
  fs::remove_all(dir);
  const std::string d = "metrics.json " + digests[0].substr(0, 12) + " / " + digests[2].substr(0, 12) +
                        ", manifest.json " + digests[1].substr(0, 12) + " / " + digests[3].substr(0, 12);
  return digests[0] == digests[2] && digests[1] == digests[3] ? pass(d) : fail(d);
}

Verdict leakage_contrast() {
  const fs::path dir = work_dir("leakage");
  write_text_file(dir / "run.ini", quick_config(dir / "out", "both"));
  if (run_cli("run-all --quiet --config " + (dir / "run.ini").string()) != 0) {
    return fail("run-all exited non-zero");
  }
  const json m = json::parse(ingest::read_text_file(dir / "out" / pipeline::artifact::kMetrics));
  const std::string report = ingest::read_text_file(dir / "out" / pipeline::artifact::kReport);
  const std::string comparison = ingest::read_text_file(dir / "out" / pipeline::artifact::kComparison);
  std::map<std::string, double> cnn_accuracy;
  bool clean_tests = true;
  for (const json& run : m.at("runs")) {
    for (const json& model : run.at("models")) {
      if (model.at("model") == "cnn") {
        cnn_accuracy[run.at("mode")] = model.at("mean_positive_class").at("accuracy").get<double>();
      }
    }
    if (run.at("mode") == "leakage_safe") {
      for (const json& fold : run.at("folds")) {
        clean_tests = clean_tests && fold.at("test_provenance").at("original") == fold.at("test_rows");
      }
    }
  }
  fs::remove_all(dir);
  const bool tagged = report.find("paper_faithful") != std::string::npos &&
                      report.find("leakage_safe") != std::string::npos &&
                      comparison.find("\npaper_faithful,cnn,") != std::string::npos &&
                      comparison.find("\nleakage_safe,cnn,") != std::string::npos;
  if (cnn_accuracy.size() != 2) return fail("a mode is missing from metrics.json");
  const std::string d = "cnn accuracy paper_faithful " + fmt(100 * cnn_accuracy["paper_faithful"]) +
                        "%, leakage_safe " + fmt(100 * cnn_accuracy["leakage_safe"]) +
                        "% [surrogate data]; both tagged in report.txt and comparison.csv" +
                        (clean_tests ? "; leakage_safe test folds hold originals only" : "");
  return tagged && clean_tests ? pass(d) : fail(d);
}

struct Criterion {
  std::string name;
  std::function<Verdict()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"stage_counts", stage_counts},
      {"cnn_accuracy_band", cnn_accuracy_band},
      {"baseline_ordering", baseline_ordering},
      {"gradient_check", gradients},
      {"auc_oracle", auc_oracle},
      {"knn_oracle", knn_oracle},
      {"smote_geometry", smote_geometry},
      {"determinism", determinism},
      {"leakage_contrast", leakage_contrast},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cadpipe acceptance checks"};
  std::vector<std::string> selected;
  bool list = false;
  app.add_option("criteria", selected, "criteria to run (default: all)");
  app.add_flag("--list", list, "print criterion names and exit");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& c : criteria()) std::cout << c.name << "\n";
    return 0;
  }
  for (const auto& name : selected) {
    if (std::none_of(criteria().begin(), criteria().end(), [&](const Criterion& c) { return c.name == name; })) {
      std::cerr << "unknown criterion: " << name << "\n";
      return 1;
    }
  }

  std::size_t passed = 0, failed = 0, skipped = 0;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.name) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = v.outcome == Outcome::kPass ? "PASS" : v.outcome == Outcome::kFail ? "FAIL" : "SKIP";
    std::cout << tag << "  " << c.name << "  " << v.detail << "  (" << fmt(secs, 3) << " s)" << std::endl;
    (v.outcome == Outcome::kPass ? passed : v.outcome == Outcome::kFail ? failed : skipped)++;
  }
  std::cout << passed << " passed, " << failed << " failed, " << skipped << " skipped" << std::endl;
  if (failed) return 1;
  return passed == 0 && skipped > 0 ? 77 : 0;
}
