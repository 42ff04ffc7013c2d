// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavesep/checkpoint.hpp"
#include "wavesep/dataset.hpp"
#include "wavesep/freeze.hpp"
#include "wavesep/losses.hpp"
#include "wavesep/optimizer.hpp"
#include "wavesep/schedule.hpp"
#include "wavesep/separator.hpp"

namespace wavesep {

struct EpochRecord {
  int epoch = 0;  // 1-based
  Phase phase = Phase::kMain;  // phase the epoch was trained in
  double learning_rate = 0.0;
  int batch_size = 0;
  double train_loss = 0.0;  // mean total loss over the epoch's steps
  double validation_loss = 0.0;
  bool improved = false;
  std::optional<Phase> entered;
};

nlohmann::json to_json(const EpochRecord& record);

struct TrainHooks {
  // Replaces the computed validation loss; used to drive the schedule with
  // stubbed values.
  std::function<double(int epoch)> validation_override;
  std::function<void(const EpochRecord&)> on_epoch;
  std::function<void(const Separator&, const EpochRecord&)> on_best;
};

struct TrainResult {
  Checkpoint best;
  std::vector<EpochRecord> history;
  Phase final_phase = Phase::kMain;
  double best_validation_loss = 0.0;
  long long steps = 0;
};

class Trainer {
 public:
  // Applies `freeze` to the separator. Throws DataError if the training or
  // validation split is empty or does not match the architecture.
  Trainer(Separator& separator, const FreezeSpec& freeze, const DatasetSplit& data, TrainConfig config);

  // One optimizer update at the current phase's batch size and rate; returns
  // the batch's total loss. Throws TrainingError on a non-finite loss.
  double step();

  // iterations_per_epoch steps, then validation and a schedule update.
  EpochRecord run_epoch(const TrainHooks& hooks = {});

  // Runs epochs until the schedule is done or max_epochs is reached; leaves
  // the best weights in the separator.
  TrainResult run(const TrainHooks& hooks = {});

  // Final-stage separation MSE over the fixed validation snippets.
  double validation_loss() const;

  const Partition& partition() const { return partition_; }
  const EarlyStoppingSchedule& schedule() const { return schedule_; }
  const TrainConfig& config() const { return config_; }
  long long steps() const { return steps_; }
  // Sum over all steps of |dL/dp|, one entry per parameter.
  const ParamGrads& accumulated_abs_gradient() const { return abs_grad_; }

 private:
  std::vector<Example> draw_batch(int size);
  void restore_best();

  Separator& separator_;
  FreezeSpec freeze_;
  const DatasetSplit& data_;
  TrainConfig config_;
  int snippet_length_ = 0;
  Partition partition_;
  EarlyStoppingSchedule schedule_;
  Adam adam_;
  Rng rng_;
  std::vector<Example> validation_;
  std::vector<ParamArray> best_params_;
  ParamGrads abs_grad_;
  long long steps_ = 0;
  int epoch_ = 0;
};

TrainResult train(Separator& separator, const FreezeSpec& freeze, const DatasetSplit& data,
                  const TrainConfig& config, const TrainHooks& hooks = {});

}  // namespace wavesep
