// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/parameters.hpp"

#include "wavesep/error.hpp"

namespace wavesep {

std::string_view to_string(GroupRole role) {
  switch (role) {
    case GroupRole::kEncoder: return "encoder";
    case GroupRole::kBottleneck: return "bottleneck";
    case GroupRole::kDecoder: return "decoder";
    case GroupRole::kResPath: return "res_path";
    case GroupRole::kOutput: return "output";
  }
  return "unknown";
}

GroupRole group_role_from_string(std::string_view text) {
  if (text == "encoder") return GroupRole::kEncoder;
  if (text == "bottleneck") return GroupRole::kBottleneck;
  if (text == "decoder") return GroupRole::kDecoder;
  if (text == "res_path") return GroupRole::kResPath;
  if (text == "output") return GroupRole::kOutput;
  throw ContractError("unknown parameter group role '" + std::string(text) + "'");
}

ParamGrads zero_gradients(const std::vector<ParamArray>& params) {
  ParamGrads grads;
  grads.reserve(params.size());
  for (const auto& p : params) grads.emplace_back(p.values.size(), 0.0);
  return grads;
}

}  // namespace wavesep
