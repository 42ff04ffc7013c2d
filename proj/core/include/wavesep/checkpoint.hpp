// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavesep/architecture.hpp"
#include "wavesep/freeze.hpp"
#include "wavesep/parameters.hpp"

namespace wavesep {

class Separator;

// Self-describing parameter archive.
//
// Layout: 8-byte magic "WSEPCKPT", u32 format version, u64 header length,
// a JSON header (architecture, freeze spec, metadata, groups with array
// names/shapes/offsets), then every array as little-endian IEEE-754 doubles
// in header order. Serializing a deserialized archive reproduces its bytes.
struct Checkpoint {
  static constexpr std::uint32_t kFormatVersion = 1;

  ArchitectureSpec architecture;
  FreezeSpec freeze;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<ParameterGroup> groups;
  std::vector<ParamArray> params;
  std::vector<bool> frozen;  // per group
};

Checkpoint make_checkpoint(const Separator& separator, const FreezeSpec& freeze,
                           nlohmann::json metadata = nlohmann::json::object());

// Rebuilds the separator described by the checkpoint and loads its weights.
Separator restore_separator(const Checkpoint& checkpoint);

std::string serialize(const Checkpoint& checkpoint);
Checkpoint deserialize(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace wavesep
