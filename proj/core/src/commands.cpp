// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wavesep/checkpoint.hpp"
#include "wavesep/error.hpp"
#include "wavesep/experiment.hpp"
#include "wavesep/report.hpp"
#include "wavesep/trainer.hpp"

#ifndef WAVESEP_VERSION
#define WAVESEP_VERSION "unknown"
#endif

namespace wavesep {
namespace {

namespace fs = std::filesystem;

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json read_json(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ReportError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

std::string eval_file(int stages) { return "evaluation_s" + std::to_string(stages) + ".json"; }

std::optional<RunManifest> existing_manifest(const fs::path& run_dir) {
  const fs::path p = run_dir / kManifestFile;
  if (!fs::exists(p)) return std::nullopt;
  return manifest_from_json(read_json(p));
}

// The evaluation matching the stage count the model was trained with, or the
// first one listed.
fs::path primary_evaluation(const fs::path& run_dir, const RunManifest& m) {
  const auto& evals = m.artifacts.at("evaluations");
  const std::string own = std::to_string(m.config.at("training").at("stages").get<int>());
  if (evals.contains(own)) return run_dir / evals.at(own).get<std::string>();
  if (evals.empty()) throw ReportError("run '" + m.name + "' has no evaluations");
  return run_dir / evals.begin().value().get<std::string>();
}

std::string name_head(std::string_view name) { return std::string(name.substr(0, name.find('-'))); }

void write_correlation(const fs::path& dir, const CorrelationReport& r) {
  const std::string stem = "correlation_" + r.source;
  write_json(dir / (stem + ".json"), to_json(r));
  write_text_atomic(dir / (stem + ".csv"), correlation_points_csv(r));
  write_text_atomic(dir / (stem + ".svg"), scatter_svg(r));
}

std::string correlation_summary(const CorrelationReport& r) {
  std::ostringstream os;
  os << r.source << ": " << r.points.size() << " variants around " << r.origin.variant << ", quadrants I/II/III/IV "
     << r.quadrants.first << "/" << r.quadrants.second << "/" << r.quadrants.third << "/" << r.quadrants.fourth;
  if (r.quadrants.on_axis) os << " (" << r.quadrants.on_axis << " on an axis)";
  os << ", Pearson " << (std::isfinite(r.pearson) ? std::to_string(r.pearson) : "n/a") << ", Spearman "
     << (std::isfinite(r.spearman) ? std::to_string(r.spearman) : "n/a") << "\n";
  return os.str();
}

}  // namespace

RunManifest cmd_train(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
  const std::string name = config.run_name();
  const fs::path run_dir = config.output / name;
  const nlohmann::json config_json = to_json(config);
  if (auto previous = existing_manifest(run_dir); previous && previous->config != config_json) {
    throw ConfigError("name: run '" + name + "' already exists in '" + config.output.string() +
                      "' with a different configuration");
  }
  fs::create_directories(run_dir);
  RunManifest manifest;
  manifest.name = name;
  manifest.config = config_json;
  manifest.version = WAVESEP_VERSION;
  manifest.seeds = {{"architecture", config.architecture.seed},
                    {"freeze", config.freeze.freeze_seed},
                    {"data", config.training.data_seed},
                    {"split", config.dataset.split_seed},
                    {"synthetic", config.dataset.synthetic_seed}};
  manifest.started = now_utc();
  write_json(run_dir / "config.json", config_json);

  const DatasetSplit data = load_dataset(config.dataset, config.architecture.audio_channels);
  Separator separator = build_separator(config.architecture);
  Trainer trainer(separator, config.freeze, data, config.training);
  const nlohmann::json base_meta = {{"run_name", name}, {"dataset", to_json(config.dataset)}};
  const Checkpoint initial = make_checkpoint(separator, config.freeze, base_meta);
  save_checkpoint(run_dir / "initial.ckpt", initial);
  if (log) {
    *log << "[" << name << "] " << count_parameters(separator, true) << " of " << count_parameters(separator)
         << " parameters trainable, " << data.train.size() << " training / " << data.validation.size()
         << " validation / " << data.test.size() << " test tracks\n";
  }

  std::ofstream history(run_dir / "history.jsonl", std::ios::trunc);
  if (!history) throw IoError("cannot write '" + (run_dir / "history.jsonl").string() + "'");
  manifest.phase_trace.push_back("main");
  TrainHooks hooks;
  hooks.on_epoch = [&](const EpochRecord& r) {
    history << to_json(r).dump() << "\n" << std::flush;
    if (r.entered) manifest.phase_trace.emplace_back(to_string(*r.entered));
    if (log) {
      *log << "[" << name << "] epoch " << r.epoch << " " << to_string(r.phase) << " train " << r.train_loss
           << " valid " << r.validation_loss << (r.improved ? " *" : "")
           << (r.entered ? " -> " + std::string(to_string(*r.entered)) : "") << "\n";
    }
  };
  hooks.on_best = [&](const Separator& sep, const EpochRecord& r) {
    nlohmann::json meta = base_meta;
    meta["epoch"] = r.epoch;
    meta["validation_loss"] = r.validation_loss;
    save_checkpoint(run_dir / "best.ckpt", make_checkpoint(sep, config.freeze, meta));
  };
  TrainResult result = trainer.run(hooks);
  history.close();
  result.best.metadata.update(base_meta);
  save_checkpoint(run_dir / "best.ckpt", result.best);

  manifest.frozen_verified = verify_frozen(initial, result.best, config.freeze);
  manifest.final_phase = std::string(to_string(result.final_phase));
  manifest.epochs = static_cast<long long>(result.history.size());
  manifest.steps = result.steps;
  manifest.best_validation_loss = result.best_validation_loss;

  nlohmann::json evaluations = nlohmann::json::object();
  for (int stages : config.eval_stages) {
    EvalReport report = evaluate_model(separator, data.test, stages);
    report.model = name;
    report.regime = std::string(to_string(config.freeze.regime));
    write_json(run_dir / eval_file(stages), to_json(report));
    evaluations[std::to_string(stages)] = eval_file(stages);
    if (log) {
      *log << "[" << name << "] stages " << stages << ": vocals mean " << report.source("vocals").stats.mean
           << " dB, median " << report.source("vocals").stats.median << " dB\n";
    }
  }
  manifest.artifacts = {{"config", "config.json"},
                        {"initial_checkpoint", "initial.ckpt"},
                        {"best_checkpoint", "best.ckpt"},
                        {"history", "history.jsonl"},
                        {"evaluations", evaluations}};
  manifest.finished = now_utc();
  write_json(run_dir / kManifestFile, to_json(manifest));
  if (!manifest.frozen_verified) {
    throw ContractError("run '" + name + "': frozen parameters changed during training");
  }
  return manifest;
}

RunManifest cmd_train(const fs::path& config_path, const CommonOptions& options) {
  ExperimentConfig config = load_experiment(config_path);
  apply_overrides(config, options);
  return cmd_train(config, options.log);
}

EvalReport cmd_evaluate(const fs::path& checkpoint_path, int stages, const std::optional<fs::path>& dataset,
                        const CommonOptions& options) {
  if (stages < 1) throw ArgumentError("--stages must be >= 1");
  const Checkpoint ck = load_checkpoint(checkpoint_path);
  const Separator separator = restore_separator(ck);
  DatasetSource source;
  if (dataset) {
    source.path = *dataset;
  } else if (ck.metadata.contains("dataset")) {
    source = dataset_source_from_json(ck.metadata.at("dataset"), "checkpoint.dataset", fs::path());
  } else if (!options.synthetic) {
    throw ArgumentError("checkpoint records no dataset; pass --dataset or --synthetic");
  }
  if (options.synthetic) {
    source.path.reset();
    source.synthetic_tracks = *options.synthetic;
  }
  if (options.seed) {
    source.split_seed = *options.seed;
    source.synthetic_seed = *options.seed;
  }
  const DatasetSplit data = load_dataset(source, ck.architecture.audio_channels);
  EvalReport report = evaluate_model(separator, data.test, stages);
  report.model = ck.metadata.value("run_name", checkpoint_path.stem().string());
  report.regime = std::string(to_string(ck.freeze.regime));
  const fs::path out_dir = options.out.value_or(checkpoint_path.parent_path());
  write_json(out_dir / eval_file(stages), to_json(report));
  if (options.log) {
    const EvalReport one[] = {report};
    *options.log << results_table_text(one);
  }
  return report;
}

SearchResult cmd_search(const fs::path& variants_path, const CommonOptions& options) {
  const nlohmann::json spec = read_json(variants_path);
  const nlohmann::json list = spec.is_array() ? spec : spec.value("configs", nlohmann::json::array());
  if (!list.is_array()) throw ConfigError("configs: expected an array of config paths");
  const fs::path base_dir = variants_path.parent_path();
  std::vector<ExperimentConfig> configs;
  for (const auto& entry : list) {
    if (!entry.is_string()) throw ConfigError("configs: expected an array of config paths");
    fs::path p = entry.get<std::string>();
    ExperimentConfig c = load_experiment(p.is_absolute() ? p : base_dir / p);
    apply_overrides(c, options);
    configs.push_back(std::move(c));
  }
  if (configs.size() < 3) {
    throw ReportError("search needs at least 3 variants including U1, got " + std::to_string(configs.size()));
  }
  fs::path out = configs.front().output;
  if (spec.is_object() && spec.contains("output")) {
    const fs::path o = spec.at("output").get<std::string>();
    out = o.is_absolute() ? o : base_dir / o;
  }
  if (options.out) out = *options.out;

  std::set<std::string> names;
  std::optional<std::size_t> baseline;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    ExperimentConfig& c = configs[i];
    c.output = out;
    const std::string name = c.run_name();
    if (c.freeze.regime != Regime::kU) throw ConfigError("freeze.regime: search variant '" + name + "' is not a U model");
    if (!names.insert(name).second) throw ReportError("variant '" + name + "' is listed twice");
    for (std::size_t k = 0; k < i; ++k) {
      if (configs[k].architecture == c.architecture && to_json(configs[k].training) == to_json(c.training) &&
          configs[k].dataset == c.dataset) {
        throw ReportError("variants '" + configs[k].run_name() + "' and '" + name + "' are identical");
      }
    }
    if (name_head(name) == "U1") {
      if (baseline) throw ReportError("more than one U1 baseline in the variant set");
      baseline = i;
    }
  }
  if (!baseline) throw ReportError("the variant set has no U1 baseline");

  auto run = [&](const ExperimentConfig& c) {
    const fs::path run_dir = c.output / c.run_name();
    auto previous = existing_manifest(run_dir);
    RunManifest m = (previous && previous->config == to_json(c)) ? *previous : cmd_train(c, options.log);
    EvalReport report = eval_report_from_json(read_json(primary_evaluation(run_dir, m)));
    return report;
  };
  std::vector<VariantPair> pairs;
  VariantPair base;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    VariantPair pair{configs[i].run_name(), run(j_counterpart(configs[i])), run(configs[i])};
    if (i == *baseline) {
      base = std::move(pair);
    } else {
      pairs.push_back(std::move(pair));
    }
  }
  SearchResult result;
  result.vocals = correlation_report(pairs, base, "vocals");
  result.accompaniment = correlation_report(pairs, base, "accompaniment");

  const fs::path dir = out / "search";
  write_correlation(dir, result.vocals);
  write_correlation(dir, result.accompaniment);

  std::vector<CorrelationPoint> ranked = result.vocals.points;
  ranked.push_back(result.vocals.origin);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const CorrelationPoint& a, const CorrelationPoint& b) { return a.j_mean > b.j_mean; });
  std::vector<CorrelationPoint> by_u = ranked;
  std::stable_sort(by_u.begin(), by_u.end(),
                   [](const CorrelationPoint& a, const CorrelationPoint& b) { return a.u_mean > b.u_mean; });
  std::ostringstream csv;
  csv << "j_rank,variant,j_mean_vocals,u_mean_vocals,u_rank\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto u_rank = std::find_if(by_u.begin(), by_u.end(),
                                     [&](const CorrelationPoint& p) { return p.variant == ranked[i].variant; }) -
                        by_u.begin();
    csv << i + 1 << ',' << ranked[i].variant << ',' << ranked[i].j_mean << ',' << ranked[i].u_mean << ','
        << u_rank + 1 << '\n';
    result.ranking.push_back(ranked[i].variant);
  }
  write_text_atomic(dir / "ranking.csv", csv.str());
  if (options.log) *options.log << correlation_summary(result.vocals) << correlation_summary(result.accompaniment);
  return result;
}

std::string cmd_report(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ReportError("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> manifests;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename() == kManifestFile) manifests.push_back(entry.path());
  }
  if (manifests.empty()) throw ReportError("no run manifests found under '" + dir.string() + "'");
  std::sort(manifests.begin(), manifests.end());

  std::vector<EvalReport> rows;
  std::map<std::string, EvalReport> primary;
  for (const fs::path& p : manifests) {
    const RunManifest m = manifest_from_json(read_json(p));
    const fs::path run_dir = p.parent_path();
    for (const auto& [stages, file] : m.artifacts.at("evaluations").items()) {
      rows.push_back(eval_report_from_json(read_json(run_dir / file.get<std::string>())));
    }
    if (!primary.emplace(m.name, eval_report_from_json(read_json(primary_evaluation(run_dir, m)))).second) {
      throw ReportError("run name '" + m.name + "' appears in more than one manifest");
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const EvalReport& a, const EvalReport& b) {
    return a.model != b.model ? a.model < b.model : a.stages < b.stages;
  });

  const fs::path out = dir / "report";
  std::string summary = results_table_text(rows);
  write_text_atomic(out / "results.csv", results_table_csv(rows));

  // Decoder-frozen models against the baseline and its encoder-frozen twin.
  std::vector<EvalReport> frozen_rows;
  for (const char* n : {"U1", "J1", "L", "L_first3", "L_last3"}) {
    if (auto it = primary.find(n); it != primary.end()) frozen_rows.push_back(it->second);
  }
  if (frozen_rows.size() > 1) write_text_atomic(out / "freeze_comparison.csv", results_table_csv(frozen_rows));

  if (primary.count("U1") && primary.count("J1")) {
    std::vector<VariantPair> pairs;
    for (const auto& [name, report] : primary) {
      if (name.empty() || name[0] != 'U' || name == "U1") continue;
      const auto j = primary.find("J" + name.substr(1));
      if (j != primary.end()) pairs.push_back({name, j->second, report});
    }
    if (pairs.size() >= 2) {
      const VariantPair base{"U1", primary.at("J1"), primary.at("U1")};
      for (const char* source : {"vocals", "accompaniment"}) {
        const CorrelationReport r = correlation_report(pairs, base, source);
        write_correlation(out, r);
        summary += correlation_summary(r);
      }
    }
  }
  write_text_atomic(out / "summary.txt", summary);
  return summary;
}

}  // namespace wavesep
