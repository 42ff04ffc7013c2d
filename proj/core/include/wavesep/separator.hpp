// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavesep/architecture.hpp"
#include "wavesep/parameters.hpp"
#include "wavesep/signal.hpp"
#include "wavesep/tape.hpp"

namespace wavesep {

// What sits at one U-Net level of a path: a single convolution, a MultiRes
// block (two chained convolutions, concatenated, projected back by a 1x1
// convolution), or nothing when a neighbouring block covers this level.
struct LevelUnit {
  enum class Kind { kConv, kMultiRes, kPassthrough };
  Kind kind = Kind::kConv;
  std::vector<ConvLayer> convs;
  std::optional<ConvLayer> projection;
  int in_channels = 0;
  int out_channels = 0;
};

/// Per-source estimates for one mixture: K waveforms of shape [channels, T].
using SourceEstimates = std::vector<Waveform>;

/// Length-preserving 1-D U-Net separator.
///
/// The encoder convolves and decimates `num_levels` times, a bottleneck
/// convolution runs at T / 2^num_levels, and the decoder upsamples, joins the
/// encoder feature of the same level and convolves again. The output layer is
/// a 1x1 convolution over [decoder features, input mix] with tanh, predicting
/// K-1 sources; the last source is the mix minus their sum.
class Separator {
 public:
  const ArchitectureSpec& spec() const { return spec_; }
  SkipSubset skip_subset() const { return skip_subset_; }

  const std::vector<ParamArray>& params() const { return params_; }
  std::vector<ParamArray>& mutable_params() { return params_; }
  const std::vector<ParameterGroup>& groups() const { return groups_; }
  std::optional<std::size_t> find_group(std::string_view name) const;

  bool skip_enabled(int level) const { return skip_enabled_.at(static_cast<std::size_t>(level)); }
  bool has_res_path(int level) const { return res_paths_.at(static_cast<std::size_t>(level)).has_value(); }
  int skip_channels(int level) const { return encoder_.at(static_cast<std::size_t>(level)).out_channels; }
  const LevelUnit& encoder_unit(int level) const { return encoder_.at(static_cast<std::size_t>(level)); }
  const LevelUnit& decoder_unit(int level) const { return decoder_.at(static_cast<std::size_t>(level)); }
  const ConvLayer& output_layer() const { return head_; }

  // Freezing state, one flag per group.
  bool group_frozen(std::size_t group) const { return frozen_.at(group); }
  void set_group_frozen(std::size_t group, bool frozen) { frozen_.at(group) = frozen; }
  // One flag per parameter array: true if its group is trainable.
  std::vector<bool> trainable_mask() const;

  // Redraws a group's weights from `seed` with the standard initializer.
  void reinitialize_group(std::size_t group, std::uint64_t seed);

  // Records the full forward graph on `tape`; returns a [K * channels, T] node
  // with source k in rows [k * channels, (k + 1) * channels).
  Tape::Node forward(Tape& tape, Tape::Node mix) const;
  Tape::Node res_path(Tape& tape, Tape::Node skip, int level) const;

 private:
  friend Separator build_separator(const ArchitectureSpec& spec, SkipSubset skips);

  Tape::Node run_unit(Tape& tape, const LevelUnit& unit, Tape::Node x) const;

  ArchitectureSpec spec_;
  SkipSubset skip_subset_ = SkipSubset::kAll;
  std::vector<ParamArray> params_;
  std::vector<ParameterGroup> groups_;
  std::vector<bool> frozen_;
  std::vector<double> init_gains_;  // per array, 0 for biases
  std::vector<LevelUnit> encoder_;  // index 1..L
  std::vector<LevelUnit> decoder_;  // index 1..L
  std::vector<std::optional<std::vector<ConvLayer>>> res_paths_;  // index 1..L
  std::vector<bool> skip_enabled_;  // index 1..L
  ConvLayer bottleneck_;
  ConvLayer head_;
};

// Throws ConfigError if the spec is invalid.
Separator build_separator(const ArchitectureSpec& spec, SkipSubset skips = SkipSubset::kAll);

// Throws ShapeError unless mix is [audio_channels, input_length].
SourceEstimates forward(const Separator& separator, const Waveform& mix);
std::vector<SourceEstimates> forward(const Separator& separator, std::span<const Waveform> batch);

std::size_t count_parameters(const Separator& separator, bool trainable_only = false);

}  // namespace wavesep
