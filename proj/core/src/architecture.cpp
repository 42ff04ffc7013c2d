// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/architecture.hpp"

#include <string>

#include "json_fields.hpp"
#include "wavesep/error.hpp"

namespace wavesep {

std::string_view to_string(SkipSubset subset) {
  switch (subset) {
    case SkipSubset::kAll: return "all";
    case SkipSubset::kFirst3: return "first_3";
    case SkipSubset::kLast3: return "last_3";
  }
  return "all";
}

SkipSubset skip_subset_from_string(std::string_view text) {
  if (text == "all") return SkipSubset::kAll;
  if (text == "first_3" || text == "first3") return SkipSubset::kFirst3;
  if (text == "last_3" || text == "last3") return SkipSubset::kLast3;
  throw ConfigError("unknown skip subset '" + std::string(text) + "' (expected all, first_3, last_3)");
}

void ArchitectureSpec::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("architecture." + what); };
  if (num_levels < 1) fail("num_levels: must be >= 1");
  if (num_levels > 30) fail("num_levels: must be <= 30");
  if (extra_filters_per_level < 1) fail("extra_filters_per_level: must be >= 1");
  if (kernel_down < 1 || kernel_down % 2 == 0) fail("kernel_down: must be a positive odd integer");
  if (kernel_up < 1 || kernel_up % 2 == 0) fail("kernel_up: must be a positive odd integer");
  if (audio_channels < 1) fail("audio_channels: must be >= 1");
  if (num_sources < 2) fail("num_sources: must be >= 2");
  const long long stride = 1LL << num_levels;
  if (input_length < 1 || input_length % stride != 0) {
    fail("input_length: " + std::to_string(input_length) + " is not divisible by 2^num_levels = " +
         std::to_string(stride));
  }
  if (const auto* rp = std::get_if<ResPathSpec>(&variant)) {
    if (rp->conv_depth < 1) fail("variant.conv_depth: must be >= 1");
    if (rp->connection_count < 1 || rp->connection_count > num_levels) {
      fail("variant.connection_count: must be in [1, num_levels]");
    }
  }
  if (const auto* mr = std::get_if<MultiResSpec>(&variant)) {
    if (mr->convs_per_block != 2) fail("variant.convs_per_block: only 2 is supported");
    const bool full = mr->blocks_per_path == num_levels;
    const bool half = num_levels % 2 == 0 && mr->blocks_per_path == num_levels / 2;
    if (!full && !half) {
      fail("variant.blocks_per_path: must equal num_levels or num_levels / 2 (num_levels even)");
    }
  }
}

std::vector<bool> active_skips(int num_levels, SkipSubset subset) {
  std::vector<bool> active(static_cast<std::size_t>(num_levels) + 1, false);
  for (int level = 1; level <= num_levels; ++level) {
    switch (subset) {
      case SkipSubset::kAll: active[level] = true; break;
      case SkipSubset::kFirst3: active[level] = level <= 3; break;
      case SkipSubset::kLast3: active[level] = level > num_levels - 3; break;
    }
  }
  return active;
}

std::vector<bool> res_path_levels(const ArchitectureSpec& spec) {
  std::vector<bool> levels(static_cast<std::size_t>(spec.num_levels) + 1, false);
  if (const auto* rp = std::get_if<ResPathSpec>(&spec.variant)) {
    // deepest j connections
    for (int level = spec.num_levels - rp->connection_count + 1; level <= spec.num_levels; ++level) {
      levels[level] = true;
    }
  }
  return levels;
}

nlohmann::json to_json(const ArchitectureSpec& spec) {
  nlohmann::json variant;
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, BaselineVariant>) {
          variant = {{"type", "baseline"}};
        } else if constexpr (std::is_same_v<V, ResPathSpec>) {
          variant = {{"type", "res_path"},
                     {"conv_depth", v.conv_depth},
                     {"connection_count", v.connection_count}};
        } else {
          variant = {{"type", "multires"},
                     {"blocks_per_path", v.blocks_per_path},
                     {"convs_per_block", v.convs_per_block}};
        }
      },
      spec.variant);
  return {{"num_levels", spec.num_levels},
          {"extra_filters_per_level", spec.extra_filters_per_level},
          {"kernel_down", spec.kernel_down},
          {"kernel_up", spec.kernel_up},
          {"input_length", spec.input_length},
          {"audio_channels", spec.audio_channels},
          {"num_sources", spec.num_sources},
          {"variant", variant},
          {"seed", spec.seed}};
}

ArchitectureSpec architecture_from_json(const nlohmann::json& j, std::string_view path) {
  using detail::optional;
  using detail::required;
  if (!j.is_object()) throw ConfigError(std::string(path) + ": expected an object");
  ArchitectureSpec spec;
  spec.num_levels = required<int>(j, path, "num_levels");
  spec.extra_filters_per_level = optional<int>(j, path, "extra_filters_per_level", 24);
  spec.kernel_down = optional<int>(j, path, "kernel_down", 15);
  spec.kernel_up = optional<int>(j, path, "kernel_up", 5);
  spec.input_length = required<int>(j, path, "input_length");
  spec.audio_channels = optional<int>(j, path, "audio_channels", 2);
  spec.num_sources = optional<int>(j, path, "num_sources", 2);
  spec.seed = optional<std::uint64_t>(j, path, "seed", 0);
  if (j.contains("variant")) {
    const std::string vpath = detail::join_path(path, "variant");
    const auto& v = j.at("variant");
    const std::string type = required<std::string>(v, vpath, "type");
    if (type == "baseline") {
      spec.variant = BaselineVariant{};
    } else if (type == "res_path") {
      spec.variant = ResPathSpec{required<int>(v, vpath, "conv_depth"),
                                 optional<int>(v, vpath, "connection_count", spec.num_levels)};
    } else if (type == "multires") {
      spec.variant = MultiResSpec{optional<int>(v, vpath, "blocks_per_path", spec.num_levels),
                                  optional<int>(v, vpath, "convs_per_block", 2)};
    } else {
      throw ConfigError(vpath + ".type: unknown variant '" + type +
                        "' (expected baseline, res_path, multires)");
    }
  }
  spec.validate();
  return spec;
}

std::string variant_code(const VariantSpec& variant) {
  if (const auto* rp = std::get_if<ResPathSpec>(&variant)) {
    return "2_" + std::to_string(rp->conv_depth) + "_" + std::to_string(rp->connection_count);
  }
  if (const auto* mr = std::get_if<MultiResSpec>(&variant)) {
    return "3_" + std::to_string(mr->blocks_per_path);
  }
  return "1";
}

}  // namespace wavesep
