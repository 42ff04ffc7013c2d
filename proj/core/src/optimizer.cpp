// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "wavesep/error.hpp"

namespace wavesep {

Adam::Adam(const std::vector<ParamArray>& params, std::vector<bool> trainable, AdamSettings settings)
    : trainable_(std::move(trainable)), settings_(settings) {
  if (trainable_.size() != params.size()) throw ContractError("Adam: trainable mask size mismatch");
  for (std::size_t a = 0; a < params.size(); ++a) {
    const std::size_t n = trainable_[a] ? params[a].values.size() : 0;
    m_.emplace_back(n, 0.0);
    v_.emplace_back(n, 0.0);
  }
}

void Adam::reset() {
  for (auto& m : m_) std::fill(m.begin(), m.end(), 0.0);
  for (auto& v : v_) std::fill(v.begin(), v.end(), 0.0);
  steps_ = 0;
}

void Adam::step(std::vector<ParamArray>& params, const ParamGrads& grads, double learning_rate) {
  ++steps_;
  const double b1 = settings_.beta1;
  const double b2 = settings_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (std::size_t a = 0; a < params.size(); ++a) {
    if (!trainable_[a]) continue;
    auto& values = params[a].values;
    const auto& g = grads[a];
    auto& m = m_[a];
    auto& v = v_[a];
    for (std::size_t i = 0; i < values.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      values[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + settings_.epsilon);
    }
  }
}

}  // namespace wavesep
