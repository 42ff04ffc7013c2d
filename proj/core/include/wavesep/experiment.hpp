// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavesep/architecture.hpp"
#include "wavesep/correlation.hpp"
#include "wavesep/dataset.hpp"
#include "wavesep/evaluate.hpp"
#include "wavesep/freeze.hpp"
#include "wavesep/schedule.hpp"

namespace wavesep {

// Either a folder of tracks or a generated corpus.
struct DatasetSource {
  std::optional<std::filesystem::path> path;
  std::uint64_t split_seed = 0;
  std::uint64_t synthetic_seed = 0;
  int synthetic_tracks = 12;
  double synthetic_seconds = 30.0;

  bool operator==(const DatasetSource&) const = default;
};

nlohmann::json to_json(const DatasetSource& source);
// Relative paths are resolved against `base_dir`.
DatasetSource dataset_source_from_json(const nlohmann::json& j, std::string_view path,
                                       const std::filesystem::path& base_dir);
DatasetSplit load_dataset(const DatasetSource& source, int channels);

struct ExperimentConfig {
  std::string name;  // empty: the canonical name
  ArchitectureSpec architecture;
  FreezeSpec freeze;
  TrainConfig training;
  DatasetSource dataset;
  std::vector<int> eval_stages{1};
  std::filesystem::path output = "runs";

  // Throws ConfigError naming the offending field.
  void validate() const;
  std::string run_name() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
// Throws IoError if unreadable, ConfigError on bad JSON or fields.
ExperimentConfig load_experiment(const std::filesystem::path& path);

// U1, J1, U2_<depth>_<count>, U3_<blocks>, U4_<stages>, U5 and their J
// counterparts; L, L_first3, L_last3. Throws ConfigError for settings that
// have no name (several variant features at once, L on a non-baseline).
std::string canonical_name(const ArchitectureSpec& arch, const FreezeSpec& freeze, const TrainConfig& training);

// Accepts the canonical name or `<canonical>-<tag>`. "all" and "half" may
// stand for the level counts in U2/U3 names and a bare "U4" for any stage
// count. Throws ConfigError on mismatch.
void validate_run_name(std::string_view name, const ArchitectureSpec& arch, const FreezeSpec& freeze,
                       const TrainConfig& training);

// The J counterpart of a U configuration: same settings, encoder frozen.
ExperimentConfig j_counterpart(const ExperimentConfig& u_config);

struct CommonOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<int> synthetic;  // number of generated tracks
  std::ostream* log = nullptr;
};

void apply_overrides(ExperimentConfig& config, const CommonOptions& options);

struct RunManifest {
  std::string name;
  nlohmann::json config;
  std::string version;
  nlohmann::json seeds;
  std::string started;
  std::string finished;
  nlohmann::json artifacts;  // paths relative to the run directory
  std::vector<std::string> phase_trace;
  std::string final_phase;
  long long epochs = 0;
  long long steps = 0;
  double best_validation_loss = 0.0;
  bool frozen_verified = false;
};

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

inline constexpr std::string_view kManifestFile = "manifest.json";

// Trains, saves checkpoints and history, evaluates on the test split for each
// configured stage count and writes the manifest into <output>/<name>/.
RunManifest cmd_train(const ExperimentConfig& config, std::ostream* log = nullptr);
RunManifest cmd_train(const std::filesystem::path& config_path, const CommonOptions& options);

// Evaluates a checkpoint on the test split. The dataset comes from `dataset`,
// from options.synthetic, or from the checkpoint's recorded source.
EvalReport cmd_evaluate(const std::filesystem::path& checkpoint, int stages,
                        const std::optional<std::filesystem::path>& dataset, const CommonOptions& options);

struct SearchResult {
  CorrelationReport vocals;
  CorrelationReport accompaniment;
  std::vector<std::string> ranking;  // variants by J mean vocal SDR, best first
};

// The variant file lists U configuration files ({"configs": [...]} or a bare
// array); one of them must be named U1. Each is trained as U and as J.
SearchResult cmd_search(const std::filesystem::path& variants_path, const CommonOptions& options);

// Consolidates the manifests below `dir` into <dir>/report/. Returns the
// human-readable table.
std::string cmd_report(const std::filesystem::path& dir);

}  // namespace wavesep
