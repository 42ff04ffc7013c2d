// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/losses.hpp"

#include <string>

#include "wavesep/error.hpp"

namespace wavesep {
namespace {

void check_same_shape(const Waveform& a, const Waveform& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": shape mismatch [" + std::to_string(a.rows()) + ", " +
                     std::to_string(a.cols()) + "] vs [" + std::to_string(b.rows()) + ", " +
                     std::to_string(b.cols()) + "]");
  }
}

double mean_squared(const Waveform& a, const Waveform& b) {
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

void check_domain(const Separator& separator, int domain) {
  if (domain < 0 || domain >= separator.spec().num_sources) {
    throw ContractError("identity loss: domain " + std::to_string(domain) + " outside [0, " +
                        std::to_string(separator.spec().num_sources) + ")");
  }
}

// Records the staged forward pass of one mixture; returns node ids
// [stage][source].
std::vector<std::vector<Tape::Node>> record_stages(const Separator& separator, Tape& tape,
                                                   const Waveform& mix, int stages) {
  const int channels = separator.spec().audio_channels;
  const int sources = separator.spec().num_sources;
  std::vector<std::vector<Tape::Node>> nodes(static_cast<std::size_t>(stages));
  const Tape::Node first = separator.forward(tape, tape.input(mix));
  for (int k = 0; k < sources; ++k) nodes[0].push_back(tape.slice(first, k * channels, channels));
  for (int s = 1; s < stages; ++s) {
    for (int k = 0; k < sources; ++k) {
      const Tape::Node out = separator.forward(tape, nodes[s - 1][k]);
      nodes[s].push_back(tape.slice(out, k * channels, channels));
    }
  }
  return nodes;
}

}  // namespace

double mse_loss(std::span<const SourceEstimates> prediction, std::span<const SourceEstimates> target) {
  if (prediction.size() != target.size() || prediction.empty()) {
    throw ShapeError("mse_loss: batch sizes differ or are empty");
  }
  double total = 0.0;
  for (std::size_t b = 0; b < prediction.size(); ++b) {
    if (prediction[b].size() != target[b].size()) throw ShapeError("mse_loss: source counts differ");
    for (std::size_t k = 0; k < prediction[b].size(); ++k) {
      check_same_shape(prediction[b][k], target[b][k], "mse_loss");
      total += mean_squared(prediction[b][k], target[b][k]);
    }
  }
  return total / static_cast<double>(prediction.size());
}

double identity_loss(const Separator& separator, std::span<const Waveform> clean_sources, int domain) {
  check_domain(separator, domain);
  double total = 0.0;
  for (const Waveform& x : clean_sources) {
    const SourceEstimates out = forward(separator, x);
    total += mean_squared(out[static_cast<std::size_t>(domain)], x);
  }
  return total;
}

double total_loss(double separation_loss, double identity_term, double identity_weight) {
  if (identity_weight < 0.0) throw ContractError("total_loss: identity weight must be >= 0");
  return separation_loss + identity_weight * identity_term;
}

std::vector<SourceEstimates> progressive_forward(const Separator& separator, const Waveform& mix, int stages) {
  if (stages < 1) throw ArgumentError("progressive_forward: stages must be >= 1");
  std::vector<SourceEstimates> result;
  result.push_back(forward(separator, mix));
  for (int s = 1; s < stages; ++s) {
    const SourceEstimates& previous = result.back();
    SourceEstimates refined;
    for (std::size_t k = 0; k < previous.size(); ++k) {
      refined.push_back(std::move(forward(separator, previous[k])[k]));
    }
    result.push_back(std::move(refined));
  }
  return result;
}

double progressive_loss(std::span<const std::vector<SourceEstimates>> per_stage,
                        std::span<const SourceEstimates> clean) {
  if (per_stage.size() != clean.size() || per_stage.empty()) {
    throw ShapeError("progressive_loss: batch sizes differ or are empty");
  }
  const std::size_t stages = per_stage.front().size();
  double total = 0.0;
  for (std::size_t s = 0; s < stages; ++s) {
    std::vector<SourceEstimates> stage;
    for (const auto& item : per_stage) {
      if (item.size() != stages) throw ShapeError("progressive_loss: stage counts differ");
      stage.push_back(item[s]);
    }
    total += mse_loss(stage, clean);
  }
  return total;
}

double separation_loss_gradient(const Separator& separator, std::span<const Example> batch, int stages,
                                ParamGrads& grads, double scale) {
  if (batch.empty()) throw DataError("empty batch");
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  const std::vector<bool> trainable = separator.trainable_mask();
  double total = 0.0;
  for (const Example& ex : batch) {
    Tape tape(separator.params(), trainable);
    const auto nodes = record_stages(separator, tape, ex.mix, stages);
    for (const auto& stage : nodes) {
      for (std::size_t k = 0; k < stage.size(); ++k) {
        const Waveform& estimate = tape.value(stage[k]);
        check_same_shape(estimate, ex.sources[k], "separation loss");
        const Waveform diff = estimate - ex.sources[k];
        const double n = static_cast<double>(diff.size());
        total += diff.squaredNorm() / n * inv_batch;
        tape.add_gradient(stage[k], diff * (2.0 * scale * inv_batch / n));
      }
    }
    tape.backward(grads);
  }
  return total;
}

double identity_loss_gradient(const Separator& separator, std::span<const Waveform> clean_sources,
                              int domain, ParamGrads& grads, double scale) {
  check_domain(separator, domain);
  const int channels = separator.spec().audio_channels;
  const std::vector<bool> trainable = separator.trainable_mask();
  double total = 0.0;
  for (const Waveform& x : clean_sources) {
    Tape tape(separator.params(), trainable);
    const Tape::Node out = separator.forward(tape, tape.input(x));
    const Tape::Node own = tape.slice(out, domain * channels, channels);
    const Waveform diff = tape.value(own) - x;
    const double n = static_cast<double>(diff.size());
    total += diff.squaredNorm() / n;
    tape.add_gradient(own, diff * (2.0 * scale / n));
    tape.backward(grads);
  }
  return total;
}

LossTerms loss_and_gradient(const Separator& separator, std::span<const Example> batch,
                            const LossSettings& settings, ParamGrads& grads) {
  LossTerms terms;
  terms.separation = separation_loss_gradient(separator, batch, settings.stages, grads);
  if (settings.identity) {
    for (int domain = 0; domain < separator.spec().num_sources; ++domain) {
      std::vector<Waveform> clean;
      clean.reserve(batch.size());
      for (const Example& ex : batch) clean.push_back(ex.sources[static_cast<std::size_t>(domain)]);
      terms.identity += identity_loss_gradient(separator, clean, domain, grads, settings.identity_weight);
    }
  }
  terms.total = total_loss(terms.separation, terms.identity, settings.identity ? settings.identity_weight : 0.0);
  return terms;
}

}  // namespace wavesep
