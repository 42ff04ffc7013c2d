// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavesep/error.hpp"

namespace wavesep {

std::optional<double> sdr(const Waveform& reference, const Waveform& estimate) {
  if (reference.rows() != estimate.rows() || reference.cols() != estimate.cols()) {
    throw ShapeError("sdr: reference and estimate shapes differ");
  }
  const double ref_energy = reference.squaredNorm();
  if (reference.size() == 0 || std::sqrt(ref_energy / static_cast<double>(reference.size())) < kSilenceRms) {
    return std::nullopt;
  }
  const double gain = (estimate.array() * reference.array()).sum() / ref_energy;
  const double target = gain * gain * ref_energy;
  const double distortion = (estimate - gain * reference).squaredNorm();
  if (target <= 0.0) return -kSdrCapDb;
  if (distortion <= 0.0) return kSdrCapDb;
  return std::clamp(10.0 * std::log10(target / distortion), -kSdrCapDb, kSdrCapDb);
}

SegmentSdr segment_sdr(const Waveform& reference, const Waveform& estimate, int sample_rate) {
  if (reference.rows() != estimate.rows() || reference.cols() != estimate.cols()) {
    throw ShapeError("segment_sdr: reference and estimate shapes differ");
  }
  if (sample_rate < 1) throw ArgumentError("segment_sdr: sample_rate must be positive");
  SegmentSdr out;
  const Eigen::Index windows = reference.cols() / sample_rate;
  for (Eigen::Index w = 0; w < windows; ++w) {
    const Eigen::Index start = w * sample_rate;
    const Waveform r = reference.middleCols(start, sample_rate);
    const Waveform e = estimate.middleCols(start, sample_rate);
    if (auto value = sdr(r, e)) {
      out.values.push_back(*value);
      out.segments.push_back(static_cast<std::size_t>(w));
    } else {
      out.excluded.push_back(static_cast<std::size_t>(w));
    }
  }
  return out;
}

namespace {

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Stats aggregate_stats(std::span<const double> values) {
  if (values.empty()) throw EvaluationError("aggregate_stats: no values");
  Stats s;
  s.count = values.size();
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.median = median_of(sorted);
  std::vector<double> dev;
  dev.reserve(sorted.size());
  for (double v : sorted) dev.push_back(std::abs(v - s.median));
  s.mad = median_of(std::move(dev));
  // Summing in sorted order keeps the result independent of input order.
  const double n = static_cast<double>(sorted.size());
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / n);
  return s;
}

}  // namespace wavesep
