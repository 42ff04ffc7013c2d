// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/separator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavesep/error.hpp"
#include "wavesep/rng.hpp"

namespace wavesep {
namespace {

double init_gain(Activation act) {
  // He-style gain for the leaky rectifier, unit gain otherwise.
  if (act == Activation::kLeakyRelu) return std::sqrt(2.0 / (1.0 + kLeakySlope * kLeakySlope));
  return 1.0;
}

std::string indexed(std::string_view base, int index) {
  return std::string(base) + "[" + std::to_string(index) + "]";
}

class Builder {
 public:
  Builder(std::vector<ParamArray>& params, std::vector<ParameterGroup>& groups,
          std::vector<double>& gains)
      : params_(params), groups_(groups), gains_(gains) {}

  void open_group(std::string name, GroupRole role, int level) {
    groups_.push_back(ParameterGroup{std::move(name), role, level, {}});
  }

  ConvLayer conv(std::string_view name, int in, int out, int kernel, Activation act) {
    ConvLayer layer;
    layer.in_channels = in;
    layer.out_channels = out;
    layer.kernel = kernel;
    layer.activation = act;
    layer.weight = add(std::string(name) + ".weight", {out, in, kernel}, init_gain(act));
    layer.bias = add(std::string(name) + ".bias", {out}, 0.0);
    return layer;
  }

  LevelUnit plain(int in, int out, int kernel) {
    LevelUnit unit;
    unit.kind = LevelUnit::Kind::kConv;
    unit.in_channels = in;
    unit.out_channels = out;
    unit.convs.push_back(conv("conv", in, out, kernel, Activation::kLeakyRelu));
    return unit;
  }

  // Two chained convolutions with filters_a then filters_b, outputs
  // concatenated, projected to `out` channels.
  LevelUnit multires(int in, int filters_a, int filters_b, int out, int kernel) {
    LevelUnit unit;
    unit.kind = LevelUnit::Kind::kMultiRes;
    unit.in_channels = in;
    unit.out_channels = out;
    unit.convs.push_back(conv("conv_a", in, filters_a, kernel, Activation::kLeakyRelu));
    unit.convs.push_back(conv("conv_b", filters_a, filters_b, kernel, Activation::kLeakyRelu));
    unit.projection = conv("proj", filters_a + filters_b, out, 1, Activation::kNone);
    return unit;
  }

 private:
  std::size_t add(std::string name, std::vector<std::int64_t> shape, double gain) {
    gains_.push_back(gain);
    std::int64_t count = 1;
    for (auto d : shape) count *= d;
    params_.push_back(ParamArray{std::move(name), std::move(shape),
                                 std::vector<double>(static_cast<std::size_t>(count), 0.0)});
    groups_.back().arrays.push_back(params_.size() - 1);
    return params_.size() - 1;
  }

  std::vector<ParamArray>& params_;
  std::vector<ParameterGroup>& groups_;
  std::vector<double>& gains_;
};

LevelUnit passthrough(int channels) {
  LevelUnit unit;
  unit.kind = LevelUnit::Kind::kPassthrough;
  unit.in_channels = channels;
  unit.out_channels = channels;
  return unit;
}

void check_mix(const ArchitectureSpec& spec, const Signal& mix) {
  if (mix.rows() != spec.audio_channels || mix.cols() != spec.input_length) {
    throw ShapeError("forward: expected mix of shape [" + std::to_string(spec.audio_channels) +
                     ", " + std::to_string(spec.input_length) + "], got [" +
                     std::to_string(mix.rows()) + ", " + std::to_string(mix.cols()) + "]");
  }
}

}  // namespace

std::optional<std::size_t> Separator::find_group(std::string_view name) const {
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (groups_[g].name == name) return g;
  }
  return std::nullopt;
}

std::vector<bool> Separator::trainable_mask() const {
  std::vector<bool> mask(params_.size(), false);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (frozen_[g]) continue;
    for (std::size_t a : groups_[g].arrays) mask[a] = true;
  }
  return mask;
}

void Separator::reinitialize_group(std::size_t group, std::uint64_t seed) {
  const ParameterGroup& g = groups_.at(group);
  Rng rng = derive_rng(seed, g.name);
  for (std::size_t a : g.arrays) {
    ParamArray& p = params_[a];
    if (p.shape.size() == 1) {
      std::fill(p.values.begin(), p.values.end(), 0.0);
      continue;
    }
    const double fan_in = static_cast<double>(p.shape[1] * p.shape[2]);
    const double bound = init_gains_[a] * std::sqrt(3.0 / fan_in);
    for (double& v : p.values) v = uniform(rng, -bound, bound);
  }
}

Tape::Node Separator::run_unit(Tape& tape, const LevelUnit& unit, Tape::Node x) const {
  switch (unit.kind) {
    case LevelUnit::Kind::kPassthrough: return x;
    case LevelUnit::Kind::kConv: return tape.conv(x, unit.convs.front());
    case LevelUnit::Kind::kMultiRes: {
      const Tape::Node a = tape.conv(x, unit.convs[0]);
      const Tape::Node b = tape.conv(a, unit.convs[1]);
      return tape.conv(tape.concat({a, b}), *unit.projection);
    }
  }
  return x;
}

Tape::Node Separator::res_path(Tape& tape, Tape::Node skip, int level) const {
  const auto& path = res_paths_.at(static_cast<std::size_t>(level));
  if (!path) throw ContractError("res_path: level " + std::to_string(level) + " has no res path");
  Tape::Node h = skip;
  for (const auto& c : *path) h = tape.conv(h, c);
  return h;
}

Tape::Node Separator::forward(Tape& tape, Tape::Node mix) const {
  check_mix(spec_, tape.value(mix));
  const int levels = spec_.num_levels;
  std::vector<Tape::Node> skips(static_cast<std::size_t>(levels) + 1, -1);
  Tape::Node h = mix;
  for (int l = 1; l <= levels; ++l) {
    h = run_unit(tape, encoder_[l], h);
    skips[l] = h;
    h = tape.decimate(h);
  }
  h = tape.conv(h, bottleneck_);
  for (int l = levels; l >= 1; --l) {
    h = tape.upsample(h);
    if (skip_enabled_[l]) {
      Tape::Node s = skips[l];
      if (res_paths_[l]) s = res_path(tape, s, l);
      h = tape.concat({h, s});
    }
    h = run_unit(tape, decoder_[l], h);
  }
  const Tape::Node head = tape.conv(tape.concat({h, mix}), head_);
  return tape.difference_output(head, mix, spec_.num_sources);
}

Separator build_separator(const ArchitectureSpec& spec, SkipSubset skips) {
  spec.validate();
  Separator s;
  s.spec_ = spec;
  s.skip_subset_ = skips;
  Builder b(s.params_, s.groups_, s.init_gains_);

  const int levels = spec.num_levels;
  const int channels = spec.audio_channels;
  const auto* multires = std::get_if<MultiResSpec>(&spec.variant);
  const bool half_blocks = multires && multires->blocks_per_path != levels;
  auto f = [&](int level) { return level_filters(spec, level); };

  s.encoder_.resize(static_cast<std::size_t>(levels) + 1);
  s.decoder_.resize(static_cast<std::size_t>(levels) + 1);
  s.res_paths_.resize(static_cast<std::size_t>(levels) + 1);
  s.skip_enabled_ = active_skips(levels, skips);

  int ch = channels;
  for (int l = 1; l <= levels; ++l) {
    if (!multires) {
      b.open_group(indexed("encoder", l), GroupRole::kEncoder, l);
      s.encoder_[l] = b.plain(ch, f(l), spec.kernel_down);
    } else if (!half_blocks) {
      b.open_group(indexed("encoder.multires_block", l), GroupRole::kEncoder, l);
      s.encoder_[l] = b.multires(ch, f(l), f(l), f(l), spec.kernel_down);
    } else if (l % 2 == 1) {
      // levels l and l + 1 share one block placed at level l
      b.open_group(indexed("encoder.multires_block", (l + 1) / 2), GroupRole::kEncoder, l);
      s.encoder_[l] = b.multires(ch, f(l), f(l + 1), f(l + 1), spec.kernel_down);
    } else {
      s.encoder_[l] = passthrough(ch);
    }
    ch = s.encoder_[l].out_channels;
  }

  b.open_group("bottleneck", GroupRole::kBottleneck, 0);
  s.bottleneck_ = b.conv("conv", ch, f(levels + 1), spec.kernel_down, Activation::kLeakyRelu);
  ch = f(levels + 1);

  const std::vector<bool> with_path = res_path_levels(spec);
  const auto* rp = std::get_if<ResPathSpec>(&spec.variant);
  for (int l = 1; l <= levels; ++l) {
    if (!with_path[l]) continue;
    b.open_group(indexed("res_path", l), GroupRole::kResPath, l);
    const int width = s.encoder_[l].out_channels;
    std::vector<ConvLayer> path;
    for (int d = 1; d <= rp->conv_depth; ++d) {
      path.push_back(b.conv(indexed("conv", d), width, width, spec.kernel_down, Activation::kLeakyRelu));
    }
    s.res_paths_[l] = std::move(path);
  }

  for (int l = levels; l >= 1; --l) {
    const int in = ch + (s.skip_enabled_[l] ? s.encoder_[l].out_channels : 0);
    if (!multires) {
      b.open_group(indexed("decoder", l), GroupRole::kDecoder, l);
      s.decoder_[l] = b.plain(in, f(l), spec.kernel_up);
    } else if (!half_blocks) {
      b.open_group(indexed("decoder.multires_block", l), GroupRole::kDecoder, l);
      s.decoder_[l] = b.multires(in, f(l), f(l), f(l), spec.kernel_up);
    } else if (l % 2 == 1) {
      // replaces the convolutions of decoder levels l + 1 and l
      b.open_group(indexed("decoder.multires_block", (l + 1) / 2), GroupRole::kDecoder, l);
      s.decoder_[l] = b.multires(in, f(l + 1), f(l), f(l), spec.kernel_up);
    } else {
      s.decoder_[l] = passthrough(in);
    }
    ch = s.decoder_[l].out_channels;
  }

  b.open_group("output_layer", GroupRole::kOutput, 0);
  s.head_ = b.conv("conv", ch + channels, channels * (spec.num_sources - 1), 1, Activation::kTanh);

  s.frozen_.assign(s.groups_.size(), false);
  for (std::size_t g = 0; g < s.groups_.size(); ++g) s.reinitialize_group(g, spec.seed);
  return s;
}

SourceEstimates forward(const Separator& separator, const Waveform& mix) {
  check_mix(separator.spec(), mix);
  Tape tape(separator.params(), {}, /*record=*/false);
  const Tape::Node out = separator.forward(tape, tape.input(mix));
  const Signal& stacked = tape.value(out);
  const int channels = separator.spec().audio_channels;
  SourceEstimates sources;
  for (int k = 0; k < separator.spec().num_sources; ++k) {
    sources.push_back(stacked.middleRows(k * channels, channels));
  }
  return sources;
}

std::vector<SourceEstimates> forward(const Separator& separator, std::span<const Waveform> batch) {
  std::vector<SourceEstimates> out;
  out.reserve(batch.size());
  for (const auto& mix : batch) out.push_back(forward(separator, mix));
  return out;
}

std::size_t count_parameters(const Separator& separator, bool trainable_only) {
  std::size_t total = 0;
  const auto& groups = separator.groups();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (trainable_only && separator.group_frozen(g)) continue;
    for (std::size_t a : groups[g].arrays) total += separator.params()[a].values.size();
  }
  return total;
}

}  // namespace wavesep
