#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "cadpipe/core/error.h"
#include "cadpipe/ingest/schema.h"
#include "cadpipe/ingest/surrogate.h"
#include "cadpipe/core/dataset_io.h"
#include "cadpipe/pipeline/pipeline.h"

namespace {

using cadpipe::pipeline::Pipeline;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2 };

struct StageArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::size_t> threads;
  bool quiet = false;
};

void add_stage_options(CLI::App* cmd, StageArgs& args) {
  cmd->add_option("--config", args.config, "pipeline config file")->required();
  cmd->add_option("--seed", args.seed, "override [run] seed");
  cmd->add_option("--mode", args.mode, "paper-faithful or leakage-safe (overrides [run] leakage_mode)")
      ->check(CLI::IsMember({"paper-faithful", "leakage-safe", "paper_faithful", "leakage_safe"}));
  cmd->add_option("--threads", args.threads, "override [run] threads");
  cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

cadpipe::pipeline::PipelineConfig effective_config(const StageArgs& args) {
  auto cfg = cadpipe::pipeline::load_config(args.config);
  if (args.seed) cfg.seed = *args.seed;
  if (args.mode) cfg.modes = {cadpipe::pipeline::leakage_mode_from_string(*args.mode)};
  if (args.threads) cfg.threads = *args.threads;
  cfg.validate();
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"Imbalanced tabular classification pipeline: clean, Borderline-SMOTE, "
               "autoencoder augmentation, k-fold evaluation of a 1-D CNN and baselines"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CADPIPE_VERSION);

  StageArgs args;
  std::function<void(Pipeline&)> action;
  const std::vector<std::pair<std::string, std::string>> stages{
      {"ingest", "parse, clean, encode and fit the scaler"},
      {"balance", "Borderline-SMOTE the scaled clean data"},
      {"augment", "train the autoencoder and append reconstructions"},
      {"evaluate", "k-fold evaluation of every enabled model"},
      {"report", "write comparison.csv, folds.csv and report.txt"},
      {"run-all", "every stage in order"},
  };
  for (const auto& [name, help] : stages) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_stage_options(cmd, args);
    cmd->callback([&, name = name] {
      action = [name](Pipeline& p) {
        if (name == "ingest") p.ingest();
        else if (name == "balance") p.balance();
        else if (name == "augment") p.augment();
        else if (name == "evaluate") p.evaluate();
        else if (name == "report") p.report();
        else p.run_all();
      };
    });
  }

  std::string schema_path;
  std::string out_path;
  cadpipe::ingest::SurrogateOptions surrogate;
  bool surrogate_requested = false;
  CLI::App* sur = app.add_subcommand(
      "surrogate", "write a synthetic CSV that follows a schema (for trying the pipeline without real data)");
  sur->add_option("--schema", schema_path, "schema JSON")->required();
  sur->add_option("--out", out_path, "output CSV")->required();
  sur->add_option("--seed", surrogate.seed, "generator seed");
  sur->add_option("--positive", surrogate.n_positive, "positive rows");
  sur->add_option("--negative", surrogate.n_negative, "negative rows");
  sur->add_option("--separation", surrogate.separation, "class mean shift of the strongest feature");
  sur->callback([&] { surrogate_requested = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (surrogate_requested) {
    const auto schema = cadpipe::ingest::load_schema(schema_path);
    cadpipe::write_text_file(out_path, cadpipe::ingest::table_to_csv(
                                           cadpipe::ingest::make_surrogate_table(schema, surrogate)));
    std::cerr << "wrote " << out_path << "\n";
    return kOk;
  }

  std::ofstream null_stream;
  std::ostream& log = args.quiet ? static_cast<std::ostream&>(null_stream) : std::cerr;
  Pipeline pipeline(effective_config(args), log);
  action(pipeline);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cadpipe::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const cadpipe::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const cadpipe::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
}
