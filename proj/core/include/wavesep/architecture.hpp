// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace wavesep {

struct BaselineVariant {
  bool operator==(const BaselineVariant&) const = default;
};

// Replaces the direct skip of the deepest `connection_count` levels by a chain
// of `conv_depth` convolutions shaped like the encoder convolution of that
// level.
struct ResPathSpec {
  int conv_depth = 2;
  int connection_count = 10;
  bool operator==(const ResPathSpec&) const = default;
};

// blocks_per_path == num_levels: each level's convolution becomes a block.
// blocks_per_path == num_levels / 2: each block replaces the convolutions of
// two successive levels.
struct MultiResSpec {
  int blocks_per_path = 10;
  int convs_per_block = 2;
  bool operator==(const MultiResSpec&) const = default;
};

using VariantSpec = std::variant<BaselineVariant, ResPathSpec, MultiResSpec>;

// Which encoder levels feed a skip connection into the decoder. The skip of
// the raw input into the output layer is always kept.
enum class SkipSubset { kAll, kFirst3, kLast3 };

std::string_view to_string(SkipSubset subset);
SkipSubset skip_subset_from_string(std::string_view text);

struct ArchitectureSpec {
  int num_levels = 10;
  int extra_filters_per_level = 24;
  int kernel_down = 15;
  int kernel_up = 5;
  int input_length = 16384;
  int audio_channels = 2;
  int num_sources = 2;
  VariantSpec variant = BaselineVariant{};
  std::uint64_t seed = 0;

  // Throws ConfigError naming the first violated invariant.
  void validate() const;

  bool operator==(const ArchitectureSpec&) const = default;
};

// Channels produced by encoder/decoder level `level` (1-based).
inline int level_filters(const ArchitectureSpec& spec, int level) {
  return spec.extra_filters_per_level * level;
}

// Levels (1-based) whose skip connection is active for a subset.
std::vector<bool> active_skips(int num_levels, SkipSubset subset);

// Levels (1-based) that carry a res path; index 0 unused.
std::vector<bool> res_path_levels(const ArchitectureSpec& spec);

nlohmann::json to_json(const ArchitectureSpec& spec);
// `path` prefixes field names in error messages, e.g. "architecture".
ArchitectureSpec architecture_from_json(const nlohmann::json& j, std::string_view path);

std::string variant_code(const VariantSpec& variant);

}  // namespace wavesep
