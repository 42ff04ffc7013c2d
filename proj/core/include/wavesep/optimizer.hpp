// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <vector>

#include "wavesep/parameters.hpp"

namespace wavesep {

struct AdamSettings {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adaptive-moment optimizer with bias correction. Moments are kept only for
// arrays flagged trainable; the others are never read or written.
class Adam {
 public:
  Adam(const std::vector<ParamArray>& params, std::vector<bool> trainable, AdamSettings settings = {});

  void step(std::vector<ParamArray>& params, const ParamGrads& grads, double learning_rate);
  void reset();

  std::int64_t steps() const { return steps_; }
  const ParamGrads& first_moments() const { return m_; }
  const ParamGrads& second_moments() const { return v_; }

 private:
  std::vector<bool> trainable_;
  AdamSettings settings_;
  ParamGrads m_;
  ParamGrads v_;
  std::int64_t steps_ = 0;
};

}  // namespace wavesep
