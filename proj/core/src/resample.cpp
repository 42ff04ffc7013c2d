// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wavesep/error.hpp"

namespace wavesep {

Waveform resample(const Waveform& x, int from_rate, int to_rate) {
  if (from_rate <= 0 || to_rate <= 0) {
    throw DataError("resample: invalid rates " + std::to_string(from_rate) + " -> " +
                    std::to_string(to_rate));
  }
  if (from_rate == to_rate) return x;

  constexpr double kZeroCrossings = 32.0;
  const double ratio = static_cast<double>(to_rate) / from_rate;
  const double cutoff = std::min(1.0, ratio) * 0.97;
  const double span = kZeroCrossings / cutoff;  // half window, in input samples
  const Eigen::Index n_in = x.cols();
  const auto n_out = static_cast<Eigen::Index>(std::llround(static_cast<double>(n_in) * ratio));

  Waveform out = Waveform::Zero(x.rows(), n_out);
  std::vector<double> taps;
  for (Eigen::Index n = 0; n < n_out; ++n) {
    const double t = static_cast<double>(n) / ratio;
    const auto first = std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::floor(t - span)) + 1);
    const auto last = std::min<Eigen::Index>(n_in - 1, static_cast<Eigen::Index>(std::floor(t + span)));
    taps.clear();
    for (Eigen::Index j = first; j <= last; ++j) {
      const double d = t - static_cast<double>(j);
      const double arg = std::numbers::pi * cutoff * d;
      const double sinc = std::abs(arg) < 1e-12 ? 1.0 : std::sin(arg) / arg;
      const double window = 0.5 * (1.0 + std::cos(std::numbers::pi * d / span));
      taps.push_back(cutoff * sinc * window);
    }
    for (Eigen::Index c = 0; c < x.rows(); ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < taps.size(); ++k) acc += taps[k] * x(c, first + static_cast<Eigen::Index>(k));
      out(c, n) = acc;
    }
  }
  return out;
}

}  // namespace wavesep
