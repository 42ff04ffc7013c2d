// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>
#include <vector>

#include "wavesep/parameters.hpp"
#include "wavesep/separator.hpp"

namespace wavesep {

// One training example: a mixture and its K clean sources.
struct Example {
  Waveform mix;
  std::vector<Waveform> sources;
};

// Per item: sum over sources of the mean squared error over channels and
// time. The batch loss is the mean over items. Throws ShapeError on mismatch.
double mse_loss(std::span<const SourceEstimates> prediction, std::span<const SourceEstimates> target);

// Feeds each clean source of domain `domain` through the separator and
// compares output channel `domain` with it: sum over items of the mean
// squared error over samples. Throws ContractError on a bad domain.
double identity_loss(const Separator& separator, std::span<const Waveform> clean_sources, int domain);

// separation + weight * identity. Throws ContractError on negative weight.
double total_loss(double separation_loss, double identity_term, double identity_weight);

// Stage 1 is forward(mix). For stage n > 1 each stage-(n-1) estimate of
// source k is fed back through the same separator and output k becomes the
// refined estimate. Returns one SourceEstimates per stage.
std::vector<SourceEstimates> progressive_forward(const Separator& separator, const Waveform& mix, int stages);

// per_stage[item][stage]; sum over stages of mse_loss on that stage.
double progressive_loss(std::span<const std::vector<SourceEstimates>> per_stage,
                        std::span<const SourceEstimates> clean);

struct LossSettings {
  int stages = 1;
  bool identity = false;
  double identity_weight = 1.0;
};

struct LossTerms {
  double separation = 0.0;  // progressive loss (plain MSE for one stage)
  double identity = 0.0;    // summed over all domains
  double total = 0.0;
};

// Evaluates the losses for a batch and accumulates d(total)/d(param) into
// `grads` for every trainable parameter of the separator.
LossTerms loss_and_gradient(const Separator& separator, std::span<const Example> batch,
                            const LossSettings& settings, ParamGrads& grads);

// Gradient pieces, exposed for finite-difference checks. `scale` multiplies
// the loss whose gradient is accumulated.
double separation_loss_gradient(const Separator& separator, std::span<const Example> batch, int stages,
                                ParamGrads& grads, double scale = 1.0);
double identity_loss_gradient(const Separator& separator, std::span<const Waveform> clean_sources,
                              int domain, ParamGrads& grads, double scale = 1.0);

}  // namespace wavesep
