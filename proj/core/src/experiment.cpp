// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <variant>

#include "json_fields.hpp"
#include "wavesep/error.hpp"

namespace wavesep {

nlohmann::json to_json(const DatasetSource& s) {
  nlohmann::json j = {{"split_seed", s.split_seed}};
  if (s.path) {
    j["path"] = s.path->string();
  } else {
    j["synthetic"] = {{"seed", s.synthetic_seed}, {"tracks", s.synthetic_tracks}, {"seconds", s.synthetic_seconds}};
  }
  return j;
}

DatasetSource dataset_source_from_json(const nlohmann::json& j, std::string_view path,
                                       const std::filesystem::path& base_dir) {
  using detail::join_path;
  if (!j.is_object()) throw ConfigError(std::string(path) + ": expected an object");
  DatasetSource s;
  s.split_seed = detail::optional<std::uint64_t>(j, path, "split_seed", 0);
  const bool has_path = j.contains("path");
  const bool has_synth = j.contains("synthetic");
  if (has_path == has_synth) throw ConfigError(std::string(path) + ": exactly one of 'path' or 'synthetic' is required");
  if (has_path) {
    std::filesystem::path p = detail::required<std::string>(j, path, "path");
    s.path = p.is_absolute() ? p : base_dir / p;
  } else {
    const std::string sp = join_path(path, "synthetic");
    const auto& synth = j.at("synthetic");
    if (!synth.is_object()) throw ConfigError(sp + ": expected an object");
    s.synthetic_seed = detail::optional<std::uint64_t>(synth, sp, "seed", 0);
    s.synthetic_tracks = detail::optional<int>(synth, sp, "tracks", 12);
    s.synthetic_seconds = detail::optional<double>(synth, sp, "seconds", 30.0);
  }
  return s;
}

DatasetSplit load_dataset(const DatasetSource& source, int channels) {
  if (source.path) {
    if (!std::filesystem::is_directory(*source.path)) {
      throw DataError("dataset directory '" + source.path->string() + "' does not exist");
    }
    return load_dataset(*source.path, source.split_seed, LoadOptions{channels, {}});
  }
  return synth_dataset(source.synthetic_seed, source.synthetic_tracks, source.synthetic_seconds, channels);
}

namespace {

bool is_baseline(const VariantSpec& v) { return std::holds_alternative<BaselineVariant>(v); }

std::string variant_suffix(const ArchitectureSpec& arch, const TrainConfig& training) {
  int features = 0;
  std::string suffix = "1";
  if (const auto* rp = std::get_if<ResPathSpec>(&arch.variant)) {
    ++features;
    suffix = "2_" + std::to_string(rp->conv_depth) + "_" + std::to_string(rp->connection_count);
  }
  if (const auto* mr = std::get_if<MultiResSpec>(&arch.variant)) {
    ++features;
    suffix = "3_" + std::to_string(mr->blocks_per_path);
  }
  if (training.stages > 1) {
    ++features;
    suffix = "4_" + std::to_string(training.stages);
  }
  if (training.identity_loss) {
    ++features;
    suffix = "5";
  }
  if (features > 1) {
    throw ConfigError("name: configuration combines several variant features and has no canonical name");
  }
  return suffix;
}

bool valid_tag(std::string_view tag) {
  if (tag.empty()) return false;
  return std::all_of(tag.begin(), tag.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::string canonical_name(const ArchitectureSpec& arch, const FreezeSpec& freeze, const TrainConfig& training) {
  const std::string suffix = variant_suffix(arch, training);
  switch (freeze.regime) {
    case Regime::kU: return "U" + suffix;
    case Regime::kJ: return "J" + suffix;
    case Regime::kL:
      if (suffix != "1") throw ConfigError("name: regime L is only defined for the baseline settings");
      switch (freeze.skip_subset) {
        case SkipSubset::kAll: return "L";
        case SkipSubset::kFirst3: return "L_first3";
        case SkipSubset::kLast3: return "L_last3";
      }
  }
  return "U1";
}

void validate_run_name(std::string_view name, const ArchitectureSpec& arch, const FreezeSpec& freeze,
                       const TrainConfig& training) {
  const std::string expected = canonical_name(arch, freeze, training);
  const std::size_t dash = name.find('-');
  const std::string_view head = name.substr(0, dash);
  if (dash != std::string_view::npos && !valid_tag(name.substr(dash + 1))) {
    throw ConfigError("name: '" + std::string(name) + "' has an empty or malformed tag");
  }
  std::vector<std::string> tokens = split(head, '_');
  const std::string level_count = std::to_string(arch.num_levels);
  const std::string half_count = std::to_string(arch.num_levels / 2);
  auto resolve = [&](std::string& token) {
    if (token == "all") token = level_count;
    if (token == "half") token = half_count;
  };
  std::string normalized;
  if (tokens[0].size() == 2 && (tokens[0][0] == 'U' || tokens[0][0] == 'J')) {
    if (tokens[0][1] == '2' && tokens.size() == 3) resolve(tokens[2]);
    if (tokens[0][1] == '3' && tokens.size() == 2) resolve(tokens[1]);
    if (tokens[0][1] == '4' && tokens.size() == 1 && training.stages > 1) tokens.push_back(std::to_string(training.stages));
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) normalized += (i ? "_" : "") + tokens[i];
  if (normalized != expected) {
    throw ConfigError("name: '" + std::string(name) + "' does not match the configuration (expected '" + expected +
                      "' or '" + expected + "-<tag>')");
  }
}

void ExperimentConfig::validate() const {
  architecture.validate();
  freeze.validate();
  training.validate();
  if (freeze.regime == Regime::kL && !is_baseline(architecture.variant)) {
    throw ConfigError("freeze.regime: regime L requires the baseline architecture");
  }
  if (eval_stages.empty()) throw ConfigError("evaluation.stages: at least one stage count is required");
  for (int s : eval_stages) {
    if (s < 1) throw ConfigError("evaluation.stages: stage counts must be >= 1");
  }
  if (!dataset.path) {
    if (dataset.synthetic_tracks < 3) throw ConfigError("dataset.synthetic.tracks: must be >= 3");
    if (!(dataset.synthetic_seconds >= 2.0)) throw ConfigError("dataset.synthetic.seconds: must be >= 2");
    const int snippet = training.snippet_length > 0 ? training.snippet_length : architecture.input_length;
    if (dataset.synthetic_seconds * kSampleRate < snippet) {
      throw ConfigError("dataset.synthetic.seconds: tracks are shorter than one training snippet");
    }
  }
  if (training.snippet_length > 0 && training.snippet_length % (1 << architecture.num_levels) != 0) {
    throw ConfigError("training.snippet_length: not divisible by 2^num_levels");
  }
  if (!name.empty()) validate_run_name(name, architecture, freeze, training);
}

std::string ExperimentConfig::run_name() const {
  return name.empty() ? canonical_name(architecture, freeze, training) : name;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"name", c.run_name()},
          {"architecture", to_json(c.architecture)},
          {"freeze", to_json(c.freeze)},
          {"training", to_json(c.training)},
          {"dataset", to_json(c.dataset)},
          {"evaluation", {{"stages", c.eval_stages}}},
          {"output", c.output.string()}};
}

ExperimentConfig experiment_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig c;
  c.name = detail::optional<std::string>(j, "", "name", "");
  c.architecture = architecture_from_json(detail::required_object(j, "", "architecture"), "architecture");
  if (j.contains("freeze")) c.freeze = freeze_from_json(j.at("freeze"), "freeze");
  if (j.contains("training")) c.training = train_config_from_json(j.at("training"), "training");
  if (j.contains("dataset")) {
    c.dataset = dataset_source_from_json(j.at("dataset"), "dataset", base_dir);
  }
  if (j.contains("evaluation")) {
    const auto& ev = j.at("evaluation");
    if (!ev.is_object()) throw ConfigError("evaluation: expected an object");
    if (ev.contains("stages")) {
      const auto& st = ev.at("stages");
      if (!st.is_array()) throw ConfigError("evaluation.stages: expected an array of integers");
      c.eval_stages.clear();
      for (const auto& s : st) {
        if (!s.is_number_integer()) throw ConfigError("evaluation.stages: expected an array of integers");
        c.eval_stages.push_back(s.get<int>());
      }
    }
  }
  std::filesystem::path out = detail::optional<std::string>(j, "", "output", "runs");
  c.output = out.is_absolute() ? out : base_dir / out;
  c.validate();
  return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  return experiment_from_json(j, path.parent_path());
}

ExperimentConfig j_counterpart(const ExperimentConfig& u) {
  if (u.freeze.regime != Regime::kU) throw ConfigError("freeze.regime: search variants must be U configurations");
  ExperimentConfig j = u;
  j.freeze.regime = Regime::kJ;
  j.name = "J" + u.run_name().substr(1);
  j.validate();
  return j;
}

void apply_overrides(ExperimentConfig& c, const CommonOptions& o) {
  if (o.seed) {
    c.architecture.seed = *o.seed;
    c.freeze.freeze_seed = *o.seed;
    c.training.data_seed = *o.seed;
    c.dataset.split_seed = *o.seed;
    c.dataset.synthetic_seed = *o.seed;
  }
  if (o.out) c.output = *o.out;
  if (o.synthetic) {
    c.dataset.path.reset();
    c.dataset.synthetic_tracks = *o.synthetic;
  }
  c.validate();
}

nlohmann::json to_json(const RunManifest& m) {
  return {{"name", m.name},
          {"config", m.config},
          {"version", m.version},
          {"seeds", m.seeds},
          {"started", m.started},
          {"finished", m.finished},
          {"artifacts", m.artifacts},
          {"phase_trace", m.phase_trace},
          {"final_phase", m.final_phase},
          {"epochs", m.epochs},
          {"steps", m.steps},
          {"best_validation_loss", m.best_validation_loss},
          {"frozen_verified", m.frozen_verified}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.name = j.at("name").get<std::string>();
    m.config = j.at("config");
    m.version = j.at("version").get<std::string>();
    m.seeds = j.at("seeds");
    m.started = j.at("started").get<std::string>();
    m.finished = j.at("finished").get<std::string>();
    m.artifacts = j.at("artifacts");
    m.phase_trace = j.at("phase_trace").get<std::vector<std::string>>();
    m.final_phase = j.at("final_phase").get<std::string>();
    m.epochs = j.at("epochs").get<long long>();
    m.steps = j.at("steps").get<long long>();
    m.best_validation_loss = j.at("best_validation_loss").get<double>();
    m.frozen_verified = j.at("frozen_verified").get<bool>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace wavesep
