// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

#include <nlohmann/json.hpp>

namespace wavesep {

enum class Phase { kMain, kFinetune1, kFinetune2, kDone };

std::string_view to_string(Phase phase);

struct TrainConfig {
  double initial_lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int initial_batch = 16;
  int iterations_per_epoch = 2000;
  int patience_epochs = 15;
  double finetune1_lr = 1e-5;
  int finetune1_batch_multiplier = 2;
  double finetune2_lr = 1e-6;
  bool identity_loss = false;
  double identity_weight = 1.0;
  int stages = 1;
  int snippet_length = 0;  // 0: the architecture's input length
  bool augment = true;
  int validation_snippets = 64;
  int max_epochs = 0;  // 0: run until the schedule finishes
  std::uint64_t data_seed = 0;

  // Throws ConfigError naming the offending "training.<field>".
  void validate() const;
};

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j, std::string_view path);

struct EpochOutcome {
  bool improved = false;
  std::optional<Phase> entered;  // set when this epoch triggered a transition
};

// Early stopping driven phase machine: main -> finetune1 -> finetune2 -> done.
// Each transition fires once `patience_epochs` consecutive epochs fail to
// improve on the best validation loss seen so far (which is kept across
// phases). Finetune1 multiplies the batch size and lowers the learning rate;
// finetune2 lowers the rate again and keeps the batch.
class EarlyStoppingSchedule {
 public:
  explicit EarlyStoppingSchedule(const TrainConfig& config);

  EpochOutcome end_epoch(double validation_loss);

  Phase phase() const { return phase_; }
  double learning_rate() const;
  int batch_size() const;
  int epoch() const { return epoch_; }
  int epochs_without_improvement() const { return stale_epochs_; }
  double best_loss() const { return best_; }

 private:
  TrainConfig config_;
  Phase phase_ = Phase::kMain;
  int epoch_ = 0;
  int stale_epochs_ = 0;
  double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace wavesep
