// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/schedule.hpp"

#include <cmath>
#include <string>

#include "json_fields.hpp"
#include "wavesep/error.hpp"

namespace wavesep {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kMain: return "main";
    case Phase::kFinetune1: return "finetune1";
    case Phase::kFinetune2: return "finetune2";
    case Phase::kDone: return "done";
  }
  return "main";
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("training." + what); };
  auto positive = [&](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + ": must be positive");
  };
  positive(initial_lr, "initial_lr");
  positive(finetune1_lr, "finetune1_lr");
  positive(finetune2_lr, "finetune2_lr");
  positive(epsilon, "epsilon");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) fail("beta1: must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) fail("beta2: must be in [0, 1)");
  if (initial_batch < 1) fail("initial_batch: must be >= 1");
  if (finetune1_batch_multiplier < 1) fail("finetune1_batch_multiplier: must be >= 1");
  if (iterations_per_epoch < 1) fail("iterations_per_epoch: must be >= 1");
  if (patience_epochs < 1) fail("patience_epochs: must be >= 1");
  if (stages < 1) fail("stages: must be >= 1");
  if (identity_weight < 0.0) fail("identity_weight: must be >= 0");
  if (snippet_length < 0) fail("snippet_length: must be >= 0");
  if (validation_snippets < 1) fail("validation_snippets: must be >= 1");
  if (max_epochs < 0) fail("max_epochs: must be >= 0");
  if (finetune1_lr > initial_lr || finetune2_lr > finetune1_lr) {
    fail("finetune learning rates must not exceed the preceding phase's rate");
  }
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"initial_lr", c.initial_lr},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"epsilon", c.epsilon},
          {"initial_batch", c.initial_batch},
          {"iterations_per_epoch", c.iterations_per_epoch},
          {"patience_epochs", c.patience_epochs},
          {"finetune1_lr", c.finetune1_lr},
          {"finetune1_batch_multiplier", c.finetune1_batch_multiplier},
          {"finetune2_lr", c.finetune2_lr},
          {"identity_loss", c.identity_loss},
          {"identity_weight", c.identity_weight},
          {"stages", c.stages},
          {"snippet_length", c.snippet_length},
          {"augment", c.augment},
          {"validation_snippets", c.validation_snippets},
          {"max_epochs", c.max_epochs},
          {"data_seed", c.data_seed}};
}

TrainConfig train_config_from_json(const nlohmann::json& j, std::string_view path) {
  using detail::optional;
  TrainConfig d;
  TrainConfig c;
  if (!j.is_object()) throw ConfigError(std::string(path) + ": expected an object");
  c.initial_lr = optional<double>(j, path, "initial_lr", d.initial_lr);
  c.beta1 = optional<double>(j, path, "beta1", d.beta1);
  c.beta2 = optional<double>(j, path, "beta2", d.beta2);
  c.epsilon = optional<double>(j, path, "epsilon", d.epsilon);
  c.initial_batch = optional<int>(j, path, "initial_batch", d.initial_batch);
  c.iterations_per_epoch = optional<int>(j, path, "iterations_per_epoch", d.iterations_per_epoch);
  c.patience_epochs = optional<int>(j, path, "patience_epochs", d.patience_epochs);
  c.finetune1_lr = optional<double>(j, path, "finetune1_lr", d.finetune1_lr);
  c.finetune1_batch_multiplier = optional<int>(j, path, "finetune1_batch_multiplier", d.finetune1_batch_multiplier);
  c.finetune2_lr = optional<double>(j, path, "finetune2_lr", d.finetune2_lr);
  c.identity_loss = optional<bool>(j, path, "identity_loss", d.identity_loss);
  c.identity_weight = optional<double>(j, path, "identity_weight", d.identity_weight);
  c.stages = optional<int>(j, path, "stages", d.stages);
  c.snippet_length = optional<int>(j, path, "snippet_length", d.snippet_length);
  c.augment = optional<bool>(j, path, "augment", d.augment);
  c.validation_snippets = optional<int>(j, path, "validation_snippets", d.validation_snippets);
  c.max_epochs = optional<int>(j, path, "max_epochs", d.max_epochs);
  c.data_seed = optional<std::uint64_t>(j, path, "data_seed", d.data_seed);
  c.validate();
  return c;
}

EarlyStoppingSchedule::EarlyStoppingSchedule(const TrainConfig& config) : config_(config) {
  config_.validate();
}

double EarlyStoppingSchedule::learning_rate() const {
  switch (phase_) {
    case Phase::kMain: return config_.initial_lr;
    case Phase::kFinetune1: return config_.finetune1_lr;
    case Phase::kFinetune2:
    case Phase::kDone: return config_.finetune2_lr;
  }
  return config_.initial_lr;
}

int EarlyStoppingSchedule::batch_size() const {
  return phase_ == Phase::kMain ? config_.initial_batch
                                : config_.initial_batch * config_.finetune1_batch_multiplier;
}

EpochOutcome EarlyStoppingSchedule::end_epoch(double validation_loss) {
  if (phase_ == Phase::kDone) throw ContractError("end_epoch after the schedule finished");
  ++epoch_;
  EpochOutcome outcome;
  if (validation_loss < best_) {
    best_ = validation_loss;
    stale_epochs_ = 0;
    outcome.improved = true;
    return outcome;
  }
  if (++stale_epochs_ < config_.patience_epochs) return outcome;
  stale_epochs_ = 0;
  switch (phase_) {
    case Phase::kMain: phase_ = Phase::kFinetune1; break;
    case Phase::kFinetune1: phase_ = Phase::kFinetune2; break;
    case Phase::kFinetune2: phase_ = Phase::kDone; break;
    case Phase::kDone: break;
  }
  outcome.entered = phase_;
  return outcome;
}

}  // namespace wavesep
