// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavesep/dataset.hpp"
#include "wavesep/metrics.hpp"
#include "wavesep/separator.hpp"

namespace wavesep {

struct TrackSegments {
  std::string track;
  SegmentSdr sdr;
};

struct SourceReport {
  std::string name;
  std::vector<TrackSegments> tracks;
  std::vector<double> pooled;  // every usable segment, in track order
  std::size_t excluded = 0;
  Stats stats;  // zero with count 0 if nothing was usable
};

struct EvalReport {
  std::string model;
  std::string regime;
  int stages = 1;
  std::string metric = "projection SDR";
  std::vector<SourceReport> sources;  // ordered as kStemNames

  const SourceReport& source(std::string_view name) const;
};

// Full-track estimates: the track is cut into input_length windows, the last
// one zero-padded, each window is separated with `stages` passes and the
// outputs are stitched and trimmed.
SourceEstimates separate_track(const Separator& separator, const Waveform& mix, int stages);

// Scores precomputed estimates (estimates[track][source]).
EvalReport score_estimates(std::span<const Track> tracks, std::span<const SourceEstimates> estimates);

// Throws EvaluationError on an empty test split, ArgumentError on stages < 1.
EvalReport evaluate_model(const Separator& separator, std::span<const Track> tracks, int stages);

nlohmann::json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);

}  // namespace wavesep
