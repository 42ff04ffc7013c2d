// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/trainer.hpp"

#include <cmath>
#include <string>

#include "wavesep/error.hpp"

namespace wavesep {

nlohmann::json to_json(const EpochRecord& r) {
  nlohmann::json j = {{"epoch", r.epoch},
                      {"phase", to_string(r.phase)},
                      {"lr", r.learning_rate},
                      {"batch", r.batch_size},
                      {"train_loss", r.train_loss},
                      {"validation_loss", r.validation_loss},
                      {"improved", r.improved}};
  if (r.entered) j["entered"] = to_string(*r.entered);
  return j;
}

namespace {

void check_tracks(const std::vector<Track>& tracks, const char* split, const ArchitectureSpec& spec,
                  int length) {
  if (tracks.empty()) throw DataError(std::string(split) + " split is empty");
  for (const Track& t : tracks) {
    if (t.channels() != spec.audio_channels) {
      throw DataError("track '" + t.name + "' has " + std::to_string(t.channels()) +
                      " channels, architecture expects " + std::to_string(spec.audio_channels));
    }
    if (static_cast<int>(t.stems.size()) != spec.num_sources) {
      throw DataError("track '" + t.name + "' has " + std::to_string(t.stems.size()) +
                      " stems, architecture expects " + std::to_string(spec.num_sources));
    }
    if (t.length() < length) {
      throw DataError("track '" + t.name + "' is shorter than the snippet length " + std::to_string(length));
    }
  }
}

Example to_example(Snippet s) { return Example{std::move(s.mix), std::move(s.stems)}; }

}  // namespace

Trainer::Trainer(Separator& separator, const FreezeSpec& freeze, const DatasetSplit& data, TrainConfig config)
    : separator_(separator),
      freeze_(freeze),
      data_(data),
      config_(std::move(config)),
      snippet_length_(config_.snippet_length > 0 ? config_.snippet_length : separator.spec().input_length),
      partition_(apply_freeze(separator, freeze)),
      schedule_(config_),
      adam_(separator.params(), separator.trainable_mask(),
            AdamSettings{config_.beta1, config_.beta2, config_.epsilon}),
      rng_(derive_rng(config_.data_seed, "train-batches")) {
  if (snippet_length_ % (1 << separator.spec().num_levels) != 0) {
    throw ConfigError("training.snippet_length: not divisible by 2^num_levels");
  }
  check_tracks(data.train, "training", separator.spec(), snippet_length_);
  check_tracks(data.validation, "validation", separator.spec(), snippet_length_);

  Rng vrng = derive_rng(config_.data_seed, "validation-snippets");
  for (int i = 0; i < config_.validation_snippets; ++i) {
    const Track& t = data.validation[uniform_index(vrng, data.validation.size())];
    validation_.push_back(to_example(sample_snippet(t, snippet_length_, vrng)));
  }
  best_params_ = separator_.params();
  abs_grad_ = zero_gradients(separator_.params());
}

std::vector<Example> Trainer::draw_batch(int size) {
  std::vector<Example> batch;
  batch.reserve(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    const Track& t = data_.train[uniform_index(rng_, data_.train.size())];
    Snippet s = sample_snippet(t, snippet_length_, rng_);
    if (config_.augment) s = augment(std::move(s), rng_);
    batch.push_back(to_example(std::move(s)));
  }
  return batch;
}

double Trainer::step() {
  const std::vector<Example> batch = draw_batch(schedule_.batch_size());
  ParamGrads grads = zero_gradients(separator_.params());
  const LossSettings settings{config_.stages, config_.identity_loss, config_.identity_weight};
  const LossTerms terms = loss_and_gradient(separator_, batch, settings, grads);
  if (!std::isfinite(terms.total)) {
    throw TrainingError("non-finite loss at step " + std::to_string(steps_ + 1) + " (epoch " +
                        std::to_string(epoch_ + 1) + ", phase " + std::string(to_string(schedule_.phase())) +
                        "): separation " + std::to_string(terms.separation) + ", identity " +
                        std::to_string(terms.identity));
  }
  for (std::size_t a = 0; a < grads.size(); ++a) {
    for (std::size_t i = 0; i < grads[a].size(); ++i) abs_grad_[a][i] += std::abs(grads[a][i]);
  }
  adam_.step(separator_.mutable_params(), grads, schedule_.learning_rate());
  ++steps_;
  return terms.total;
}

double Trainer::validation_loss() const {
  std::vector<SourceEstimates> predicted;
  std::vector<SourceEstimates> clean;
  predicted.reserve(validation_.size());
  for (const Example& ex : validation_) {
    predicted.push_back(progressive_forward(separator_, ex.mix, config_.stages).back());
    clean.push_back(ex.sources);
  }
  return mse_loss(predicted, clean);
}

void Trainer::restore_best() {
  auto& params = separator_.mutable_params();
  for (std::size_t a = 0; a < params.size(); ++a) params[a].values = best_params_[a].values;
}

EpochRecord Trainer::run_epoch(const TrainHooks& hooks) {
  if (schedule_.phase() == Phase::kDone) throw ContractError("run_epoch after the schedule finished");
  EpochRecord record;
  record.epoch = ++epoch_;
  record.phase = schedule_.phase();
  record.learning_rate = schedule_.learning_rate();
  record.batch_size = schedule_.batch_size();
  double sum = 0.0;
  for (int i = 0; i < config_.iterations_per_epoch; ++i) sum += step();
  record.train_loss = sum / config_.iterations_per_epoch;
  record.validation_loss = hooks.validation_override ? hooks.validation_override(record.epoch) : validation_loss();
  if (!std::isfinite(record.validation_loss)) {
    throw TrainingError("non-finite validation loss at epoch " + std::to_string(record.epoch));
  }
  const EpochOutcome outcome = schedule_.end_epoch(record.validation_loss);
  record.improved = outcome.improved;
  record.entered = outcome.entered;
  if (outcome.improved) {
    best_params_ = separator_.params();
    if (hooks.on_best) hooks.on_best(separator_, record);
  }
  if (outcome.entered) {
    // Each phase starts from the best weights with fresh moments.
    restore_best();
    adam_.reset();
  }
  if (hooks.on_epoch) hooks.on_epoch(record);
  return record;
}

TrainResult Trainer::run(const TrainHooks& hooks) {
  TrainResult result;
  while (schedule_.phase() != Phase::kDone) {
    if (config_.max_epochs > 0 && epoch_ >= config_.max_epochs) break;
    result.history.push_back(run_epoch(hooks));
  }
  restore_best();
  result.final_phase = schedule_.phase();
  result.best_validation_loss = schedule_.best_loss();
  result.steps = steps_;
  nlohmann::json meta = {{"epochs", epoch_},
                         {"steps", steps_},
                         {"final_phase", to_string(schedule_.phase())},
                         {"best_validation_loss", schedule_.best_loss()},
                         {"training", to_json(config_)}};
  result.best = make_checkpoint(separator_, freeze_, std::move(meta));
  return result;
}

TrainResult train(Separator& separator, const FreezeSpec& freeze, const DatasetSplit& data,
                  const TrainConfig& config, const TrainHooks& hooks) {
  Trainer trainer(separator, freeze, data, config);
  return trainer.run(hooks);
}

}  // namespace wavesep
