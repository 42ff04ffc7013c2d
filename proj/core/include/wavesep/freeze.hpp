// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavesep/architecture.hpp"
#include "wavesep/parameters.hpp"

namespace wavesep {

class Separator;
struct Checkpoint;

// U: everything trained. J: encoder (with bottleneck and res paths) fixed at
// random init. L: decoder fixed at random init; output layer still trained.
enum class Regime { kU, kJ, kL };

std::string_view to_string(Regime regime);
Regime regime_from_string(std::string_view text);

struct FreezeSpec {
  Regime regime = Regime::kU;
  SkipSubset skip_subset = SkipSubset::kAll;
  std::uint64_t freeze_seed = 0;

  // Throws ConfigError; skip subsets other than kAll require regime L.
  void validate() const;
  bool operator==(const FreezeSpec&) const = default;
};

nlohmann::json to_json(const FreezeSpec& spec);
FreezeSpec freeze_from_json(const nlohmann::json& j, std::string_view path);

// Whether a group with this role is frozen under a regime.
bool role_frozen(GroupRole role, Regime regime);

struct Partition {
  std::vector<std::string> trainable;
  std::vector<std::string> frozen;
  std::vector<int> disabled_skips;  // encoder levels whose skip was removed
};

// Rebuilds the separator if the skip subset changes its graph, redraws every
// frozen group from freeze_seed and marks it frozen. Returns a disjoint
// partition covering every group.
Partition apply_freeze(Separator& separator, const FreezeSpec& spec);

// Marks groups frozen per the regime without touching weights (used when
// restoring a checkpoint).
Partition mark_frozen(Separator& separator, const FreezeSpec& spec);

// True iff every frozen group is byte-identical across the two checkpoints.
// Throws ContractError if the checkpoints describe different models.
bool verify_frozen(const Checkpoint& before, const Checkpoint& after, const FreezeSpec& spec);

}  // namespace wavesep
