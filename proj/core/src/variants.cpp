// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/variants.hpp"

#include "wavesep/error.hpp"

namespace wavesep {

Signal apply_res_path(const Separator& separator, const Signal& skip_features, int level) {
  if (level < 1 || level > separator.spec().num_levels || !separator.has_res_path(level)) {
    throw ContractError("apply_res_path: level " + std::to_string(level) + " has no res path");
  }
  Tape tape(separator.params(), {}, /*record=*/false);
  return tape.value(separator.res_path(tape, tape.input(skip_features), level));
}

Separator build_res_path_separator(ArchitectureSpec arch, const ResPathSpec& spec) {
  arch.variant = spec;
  return build_separator(arch);
}

Separator build_multires_separator(ArchitectureSpec arch, const MultiResSpec& spec) {
  const int levels = arch.num_levels;
  if (spec.blocks_per_path < 1 ||
      (spec.blocks_per_path != levels && spec.blocks_per_path * 2 != levels)) {
    throw ConfigError("architecture.variant.blocks_per_path: " + std::to_string(spec.blocks_per_path) +
                      " blocks do not divide " + std::to_string(levels) + " levels into 1 or 2 per block");
  }
  arch.variant = spec;
  return build_separator(arch);
}

std::vector<MultiResBlockLayout> multires_layout(const Separator& separator) {
  std::vector<MultiResBlockLayout> blocks;
  const int levels = separator.spec().num_levels;
  auto describe = [&](const LevelUnit& unit, int level) {
    if (unit.kind != LevelUnit::Kind::kMultiRes) return;
    MultiResBlockLayout b;
    b.level = level;
    b.in_channels = unit.in_channels;
    b.filters_a = unit.convs[0].out_channels;
    b.filters_b = unit.convs[1].out_channels;
    b.concat_channels = b.filters_a + b.filters_b;
    b.out_channels = unit.out_channels;
    for (const auto& g : separator.groups()) {
      if (!g.arrays.empty() && g.arrays.front() == unit.convs[0].weight) b.group = g.name;
    }
    blocks.push_back(b);
  };
  for (int l = 1; l <= levels; ++l) describe(separator.encoder_unit(l), l);
  for (int l = levels; l >= 1; --l) describe(separator.decoder_unit(l), l);
  return blocks;
}

}  // namespace wavesep
