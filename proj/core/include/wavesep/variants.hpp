// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <string>
#include <vector>

#include "wavesep/architecture.hpp"
#include "wavesep/separator.hpp"

namespace wavesep {

// Runs the res path attached to `level` on a skip feature map. The output has
// the shape of the input. Throws ContractError if the level has no path; the
// caller is expected to bypass such levels.
Signal apply_res_path(const Separator& separator, const Signal& skip_features, int level);

Separator build_res_path_separator(ArchitectureSpec arch, const ResPathSpec& spec);

// Throws ConfigError unless blocks_per_path is num_levels or num_levels / 2.
Separator build_multires_separator(ArchitectureSpec arch, const MultiResSpec& spec);

// Channel bookkeeping of one MultiRes block, for reports and tests.
struct MultiResBlockLayout {
  std::string group;
  int level = 0;  // level whose position the block occupies
  int in_channels = 0;
  int filters_a = 0;
  int filters_b = 0;
  int concat_channels = 0;  // filters_a + filters_b
  int out_channels = 0;     // after the 1x1 projection
};

std::vector<MultiResBlockLayout> multires_layout(const Separator& separator);

}  // namespace wavesep
