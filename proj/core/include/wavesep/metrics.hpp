// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wavesep/signal.hpp"

namespace wavesep {

inline constexpr double kSdrCapDb = 120.0;
inline constexpr double kSilenceRms = 1e-5;

// Projection SDR over all channels jointly, clamped to [-120, 120] dB.
// Returns nullopt when the reference RMS is below kSilenceRms. Throws
// ShapeError on mismatched shapes.
std::optional<double> sdr(const Waveform& reference, const Waveform& estimate);

struct SegmentSdr {
  std::vector<double> values;          // one per usable window
  std::vector<std::size_t> segments;   // window index of each value
  std::vector<std::size_t> excluded;   // windows with a silent reference
};

// Non-overlapping windows of `sample_rate` samples; a trailing partial window
// is dropped.
SegmentSdr segment_sdr(const Waveform& reference, const Waveform& estimate, int sample_rate);

struct Stats {
  double median = 0.0;
  double mad = 0.0;
  double mean = 0.0;
  double sd = 0.0;  // population
  std::size_t count = 0;
};

// Throws EvaluationError on an empty list.
Stats aggregate_stats(std::span<const double> values);

}  // namespace wavesep
