// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/evaluate.hpp"

#include <algorithm>

#include "wavesep/error.hpp"
#include "wavesep/losses.hpp"

namespace wavesep {

const SourceReport& EvalReport::source(std::string_view name) const {
  for (const SourceReport& s : sources) {
    if (s.name == name) return s;
  }
  throw EvaluationError("report '" + model + "' has no source '" + std::string(name) + "'");
}

SourceEstimates separate_track(const Separator& separator, const Waveform& mix, int stages) {
  if (stages < 1) throw ArgumentError("stages must be >= 1");
  const ArchitectureSpec& spec = separator.spec();
  if (mix.rows() != spec.audio_channels) {
    throw ShapeError("separate_track: mix has " + std::to_string(mix.rows()) + " channels, expected " +
                     std::to_string(spec.audio_channels));
  }
  const Eigen::Index window = spec.input_length;
  const Eigen::Index n = mix.cols();
  SourceEstimates out(static_cast<std::size_t>(spec.num_sources), Waveform::Zero(mix.rows(), n));
  Waveform chunk(mix.rows(), window);
  for (Eigen::Index start = 0; start < n; start += window) {
    const Eigen::Index len = std::min(window, n - start);
    chunk.setZero();
    chunk.leftCols(len) = mix.middleCols(start, len);
    const SourceEstimates est = progressive_forward(separator, chunk, stages).back();
    for (std::size_t k = 0; k < out.size(); ++k) out[k].middleCols(start, len) = est[k].leftCols(len);
  }
  return out;
}

EvalReport score_estimates(std::span<const Track> tracks, std::span<const SourceEstimates> estimates) {
  if (tracks.empty()) throw EvaluationError("test split is empty");
  if (tracks.size() != estimates.size()) throw ShapeError("score_estimates: one estimate set per track required");
  EvalReport report;
  for (std::size_t k = 0; k < kStemNames.size(); ++k) {
    SourceReport source;
    source.name = std::string(kStemNames[k]);
    for (std::size_t t = 0; t < tracks.size(); ++t) {
      if (estimates[t].size() != tracks[t].stems.size()) {
        throw ShapeError("score_estimates: source count differs for track '" + tracks[t].name + "'");
      }
      TrackSegments seg{tracks[t].name, segment_sdr(tracks[t].stems[k], estimates[t][k], tracks[t].sample_rate)};
      source.pooled.insert(source.pooled.end(), seg.sdr.values.begin(), seg.sdr.values.end());
      source.excluded += seg.sdr.excluded.size();
      source.tracks.push_back(std::move(seg));
    }
    if (!source.pooled.empty()) source.stats = aggregate_stats(source.pooled);
    report.sources.push_back(std::move(source));
  }
  return report;
}

EvalReport evaluate_model(const Separator& separator, std::span<const Track> tracks, int stages) {
  if (stages < 1) throw ArgumentError("stages must be >= 1");
  if (tracks.empty()) throw EvaluationError("test split is empty");
  std::vector<SourceEstimates> estimates;
  estimates.reserve(tracks.size());
  for (const Track& t : tracks) estimates.push_back(separate_track(separator, t.mixture, stages));
  EvalReport report = score_estimates(tracks, estimates);
  report.stages = stages;
  return report;
}

namespace {

nlohmann::json stats_json(const Stats& s) {
  return {{"median", s.median}, {"mad", s.mad}, {"mean", s.mean}, {"sd", s.sd}, {"count", s.count}};
}

}  // namespace

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json sources = nlohmann::json::array();
  for (const SourceReport& s : report.sources) {
    nlohmann::json tracks = nlohmann::json::array();
    for (const TrackSegments& t : s.tracks) {
      tracks.push_back({{"track", t.track},
                        {"values", t.sdr.values},
                        {"segments", t.sdr.segments},
                        {"excluded", t.sdr.excluded}});
    }
    sources.push_back({{"name", s.name}, {"stats", stats_json(s.stats)}, {"excluded", s.excluded}, {"tracks", tracks}});
  }
  return {{"model", report.model},
          {"regime", report.regime},
          {"stages", report.stages},
          {"metric", report.metric},
          {"sources", sources}};
}

EvalReport eval_report_from_json(const nlohmann::json& j) {
  try {
    EvalReport r;
    r.model = j.at("model").get<std::string>();
    r.regime = j.at("regime").get<std::string>();
    r.stages = j.at("stages").get<int>();
    r.metric = j.at("metric").get<std::string>();
    for (const auto& s : j.at("sources")) {
      SourceReport src;
      src.name = s.at("name").get<std::string>();
      src.excluded = s.at("excluded").get<std::size_t>();
      const auto& st = s.at("stats");
      src.stats = Stats{st.at("median").get<double>(), st.at("mad").get<double>(), st.at("mean").get<double>(),
                        st.at("sd").get<double>(), st.at("count").get<std::size_t>()};
      for (const auto& t : s.at("tracks")) {
        TrackSegments seg;
        seg.track = t.at("track").get<std::string>();
        seg.sdr.values = t.at("values").get<std::vector<double>>();
        seg.sdr.segments = t.at("segments").get<std::vector<std::size_t>>();
        seg.sdr.excluded = t.at("excluded").get<std::vector<std::size_t>>();
        src.pooled.insert(src.pooled.end(), seg.sdr.values.begin(), seg.sdr.values.end());
        src.tracks.push_back(std::move(seg));
      }
      r.sources.push_back(std::move(src));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(std::string("malformed evaluation report: ") + e.what());
  }
}

}  // namespace wavesep
