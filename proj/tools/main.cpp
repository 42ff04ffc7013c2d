// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wavesep/error.hpp"
#include "wavesep/experiment.hpp"

namespace {

int exit_code(const std::string& category) {
  static const std::map<std::string, int> codes = {
      {"argument", 2}, {"config", 3},     {"data", 4},  {"io", 5},    {"training", 6},
      {"evaluation", 7}, {"report", 8}, {"shape", 9}, {"contract", 10}};
  const auto it = codes.find(category);
  return it == codes.end() ? 1 : it->second;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavesep: waveform source separation experiments"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> synthetic;
  bool quiet = false;
  app.add_option("--seed", seed, "Override every seed of the run");
  app.add_option("--out", out, "Output directory");
  app.add_option("--synthetic", synthetic, "Use a generated corpus with N tracks")->check(CLI::Range(3, 100000));
  app.add_flag("-q,--quiet", quiet, "Suppress progress output");

  std::string config_path;
  auto* train = app.add_subcommand("train", "Train one model from a config file");
  train->add_option("--config", config_path, "Experiment config (JSON)")->required();

  std::string checkpoint;
  int stages = 1;
  std::optional<std::string> dataset;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint on the test split");
  evaluate->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  evaluate->add_option("--stages", stages, "Inference stages")->required();
  evaluate->add_option("--dataset", dataset, "Dataset root (defaults to the checkpoint's source)");

  std::string variants_path;
  auto* search = app.add_subcommand("search", "Train U and J models for a variant set and correlate them");
  search->add_option("--variants", variants_path, "Variant set file (JSON)")->required();

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Summarize the runs below a directory");
  report->add_option("--dir", report_dir, "Run directory")->required();

  for (auto* sub : {train, evaluate, search, report}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "argument: " << e.what() << "\n";
    return exit_code("argument");
  }

  wavesep::CommonOptions options;
  options.seed = seed;
  if (out) options.out = std::filesystem::path(*out);
  options.synthetic = synthetic;
  options.log = quiet ? nullptr : &std::cerr;

  try {
    if (*train) {
      const auto manifest = wavesep::cmd_train(config_path, options);
      std::cout << manifest.name << ": " << manifest.final_phase << " after " << manifest.epochs << " epochs\n";
    } else if (*evaluate) {
      const auto result = wavesep::cmd_evaluate(checkpoint, stages,
                                                dataset ? std::optional<std::filesystem::path>(*dataset) : std::nullopt,
                                                options);
      std::cout << result.model << " (" << result.stages << " stages): vocals median "
                << result.source("vocals").stats.median << " dB, mean " << result.source("vocals").stats.mean
                << " dB\n";
    } else if (*search) {
      const auto result = wavesep::cmd_search(variants_path, options);
      std::cout << "spearman " << result.vocals.spearman << ", ranking:";
      for (const auto& v : result.ranking) std::cout << " " << v;
      std::cout << "\n";
    } else if (*report) {
      std::cout << wavesep::cmd_report(report_dir);
    }
  } catch (const wavesep::Error& e) {
    std::cerr << e.category() << ": " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io: " << e.what() << "\n";
    return exit_code("io");
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
