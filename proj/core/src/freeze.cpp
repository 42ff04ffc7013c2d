// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/freeze.hpp"

#include <cstring>

#include "json_fields.hpp"
#include "wavesep/checkpoint.hpp"
#include "wavesep/error.hpp"
#include "wavesep/separator.hpp"

namespace wavesep {
namespace {

// Group names are "<prefix>[k]" or "<prefix>.multires_block[k]"; the prefix
// must agree with the role.
void check_group_consistency(const ParameterGroup& g) {
  std::string_view expected;
  switch (g.role) {
    case GroupRole::kEncoder: expected = "encoder"; break;
    case GroupRole::kBottleneck: expected = "bottleneck"; break;
    case GroupRole::kDecoder: expected = "decoder"; break;
    case GroupRole::kResPath: expected = "res_path"; break;
    case GroupRole::kOutput: expected = "output_layer"; break;
  }
  if (g.name.rfind(expected, 0) != 0) {
    throw ContractError("parameter group '" + g.name + "' is not a known " +
                        std::string(to_string(g.role)) + " group");
  }
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kU: return "U";
    case Regime::kJ: return "J";
    case Regime::kL: return "L";
  }
  return "U";
}

Regime regime_from_string(std::string_view text) {
  if (text == "U" || text == "u") return Regime::kU;
  if (text == "J" || text == "j") return Regime::kJ;
  if (text == "L" || text == "l") return Regime::kL;
  throw ConfigError("unknown regime '" + std::string(text) + "' (expected U, J, L)");
}

void FreezeSpec::validate() const {
  if (skip_subset != SkipSubset::kAll && regime != Regime::kL) {
    throw ConfigError("freeze.skip_subset: '" + std::string(to_string(skip_subset)) +
                      "' is only supported with regime L");
  }
}

nlohmann::json to_json(const FreezeSpec& spec) {
  return {{"regime", std::string(to_string(spec.regime))},
          {"skip_subset", std::string(to_string(spec.skip_subset))},
          {"freeze_seed", spec.freeze_seed}};
}

FreezeSpec freeze_from_json(const nlohmann::json& j, std::string_view path) {
  FreezeSpec spec;
  try {
    spec.regime = regime_from_string(detail::optional<std::string>(j, path, "regime", "U"));
    spec.skip_subset = skip_subset_from_string(detail::optional<std::string>(j, path, "skip_subset", "all"));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(path) + ": " + e.what());
  }
  spec.freeze_seed = detail::optional<std::uint64_t>(j, path, "freeze_seed", 0);
  spec.validate();
  return spec;
}

bool role_frozen(GroupRole role, Regime regime) {
  switch (regime) {
    case Regime::kU: return false;
    case Regime::kJ:
      return role == GroupRole::kEncoder || role == GroupRole::kBottleneck || role == GroupRole::kResPath;
    case Regime::kL: return role == GroupRole::kDecoder;
  }
  return false;
}

Partition mark_frozen(Separator& separator, const FreezeSpec& spec) {
  spec.validate();
  Partition partition;
  const auto& groups = separator.groups();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    check_group_consistency(groups[g]);
    const bool frozen = role_frozen(groups[g].role, spec.regime);
    separator.set_group_frozen(g, frozen);
    (frozen ? partition.frozen : partition.trainable).push_back(groups[g].name);
  }
  for (int l = 1; l <= separator.spec().num_levels; ++l) {
    if (!separator.skip_enabled(l)) partition.disabled_skips.push_back(l);
  }
  return partition;
}

Partition apply_freeze(Separator& separator, const FreezeSpec& spec) {
  spec.validate();
  if (separator.skip_subset() != spec.skip_subset) {
    separator = build_separator(separator.spec(), spec.skip_subset);
  }
  Partition partition = mark_frozen(separator, spec);
  for (std::size_t g = 0; g < separator.groups().size(); ++g) {
    if (separator.group_frozen(g)) separator.reinitialize_group(g, spec.freeze_seed);
  }
  return partition;
}

bool verify_frozen(const Checkpoint& before, const Checkpoint& after, const FreezeSpec& spec) {
  if (!(before.architecture == after.architecture) ||
      before.freeze.skip_subset != after.freeze.skip_subset ||
      before.groups.size() != after.groups.size() || before.params.size() != after.params.size()) {
    throw ContractError("verify_frozen: checkpoints describe different models");
  }
  for (std::size_t g = 0; g < before.groups.size(); ++g) {
    const ParameterGroup& gb = before.groups[g];
    const ParameterGroup& ga = after.groups[g];
    if (gb.name != ga.name || gb.arrays != ga.arrays) {
      throw ContractError("verify_frozen: group layout differs at '" + gb.name + "'");
    }
    if (!role_frozen(gb.role, spec.regime)) continue;
    for (std::size_t a : gb.arrays) {
      const auto& vb = before.params[a].values;
      const auto& va = after.params[a].values;
      if (vb.size() != va.size()) return false;
      if (std::memcmp(vb.data(), va.data(), vb.size() * sizeof(double)) != 0) return false;
    }
  }
  return true;
}

}  // namespace wavesep
