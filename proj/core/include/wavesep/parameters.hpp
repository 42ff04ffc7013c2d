// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wavesep {

struct ParamArray {
  std::string name;
  std::vector<std::int64_t> shape;
  std::vector<double> values;
};

enum class GroupRole { kEncoder, kBottleneck, kDecoder, kResPath, kOutput };

std::string_view to_string(GroupRole role);
GroupRole group_role_from_string(std::string_view text);

// A named set of parameter arrays. Every array of a separator belongs to
// exactly one group; groups are the unit of freezing and checkpointing.
struct ParameterGroup {
  std::string name;
  GroupRole role = GroupRole::kEncoder;
  int level = 0;  // 1-based U-Net level, 0 for bottleneck/output
  std::vector<std::size_t> arrays;  // indices into the flat parameter list
};

// One gradient buffer per parameter array, same sizes as the values.
using ParamGrads = std::vector<std::vector<double>>;

ParamGrads zero_gradients(const std::vector<ParamArray>& params);

}  // namespace wavesep
