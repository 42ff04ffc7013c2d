// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "wavesep/error.hpp"
#include "wavesep/separator.hpp"

namespace wavesep {
namespace {

constexpr char kMagic[8] = {'W', 'S', 'E', 'P', 'C', 'K', 'P', 'T'};

void put_u64(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(std::string_view in, std::size_t offset, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  }
  return v;
}

}  // namespace

Checkpoint make_checkpoint(const Separator& separator, const FreezeSpec& freeze, nlohmann::json metadata) {
  Checkpoint c;
  c.architecture = separator.spec();
  c.freeze = freeze;
  c.metadata = std::move(metadata);
  c.groups = separator.groups();
  c.params = separator.params();
  for (std::size_t g = 0; g < c.groups.size(); ++g) c.frozen.push_back(separator.group_frozen(g));
  return c;
}

Separator restore_separator(const Checkpoint& checkpoint) {
  Separator s = build_separator(checkpoint.architecture, checkpoint.freeze.skip_subset);
  if (s.params().size() != checkpoint.params.size() || s.groups().size() != checkpoint.groups.size()) {
    throw ContractError("checkpoint does not match the architecture it declares");
  }
  auto& params = s.mutable_params();
  for (std::size_t a = 0; a < params.size(); ++a) {
    if (params[a].shape != checkpoint.params[a].shape || params[a].name != checkpoint.params[a].name) {
      throw ContractError("checkpoint array '" + checkpoint.params[a].name + "' has an unexpected shape");
    }
    params[a].values = checkpoint.params[a].values;
  }
  mark_frozen(s, checkpoint.freeze);
  return s;
}

std::string serialize(const Checkpoint& checkpoint) {
  std::vector<std::uint64_t> offsets;
  std::uint64_t total = 0;
  for (const ParamArray& p : checkpoint.params) {
    offsets.push_back(total);
    total += p.values.size();
  }
  nlohmann::json groups = nlohmann::json::array();
  for (std::size_t g = 0; g < checkpoint.groups.size(); ++g) {
    const ParameterGroup& group = checkpoint.groups[g];
    nlohmann::json arrays = nlohmann::json::array();
    for (std::size_t a : group.arrays) {
      const ParamArray& p = checkpoint.params[a];
      arrays.push_back({{"index", a},
                        {"name", p.name},
                        {"shape", p.shape},
                        {"offset", offsets[a]},
                        {"count", p.values.size()}});
    }
    groups.push_back({{"name", group.name},
                      {"role", std::string(to_string(group.role))},
                      {"level", group.level},
                      {"frozen", g < checkpoint.frozen.size() && checkpoint.frozen[g]},
                      {"arrays", arrays}});
  }
  const nlohmann::json header = {{"format_version", Checkpoint::kFormatVersion},
                                 {"architecture", to_json(checkpoint.architecture)},
                                 {"freeze", to_json(checkpoint.freeze)},
                                 {"metadata", checkpoint.metadata},
                                 {"groups", groups},
                                 {"num_arrays", checkpoint.params.size()}};
  const std::string text = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  put_u64(out, Checkpoint::kFormatVersion, 4);
  put_u64(out, text.size(), 8);
  out += text;
  out.reserve(out.size() + total * 8);
  for (const ParamArray& p : checkpoint.params) {
    for (double v : p.values) put_u64(out, std::bit_cast<std::uint64_t>(v), 8);
  }
  return out;
}

Checkpoint deserialize(std::string_view bytes) {
  if (bytes.size() < 20 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw IoError("checkpoint: bad magic");
  }
  const auto version = static_cast<std::uint32_t>(get_u64(bytes, 8, 4));
  if (version != Checkpoint::kFormatVersion) {
    throw IoError("checkpoint: unsupported format version " + std::to_string(version));
  }
  const std::uint64_t header_len = get_u64(bytes, 12, 8);
  if (20 + header_len > bytes.size()) throw IoError("checkpoint: truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(20, header_len));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("checkpoint: malformed header: ") + e.what());
  }

  Checkpoint c;
  c.architecture = architecture_from_json(header.at("architecture"), "checkpoint.architecture");
  c.freeze = freeze_from_json(header.at("freeze"), "checkpoint.freeze");
  c.metadata = header.value("metadata", nlohmann::json::object());
  const std::size_t num_arrays = header.at("num_arrays").get<std::size_t>();
  c.params.resize(num_arrays);
  const std::size_t payload = 20 + header_len;
  for (const auto& gj : header.at("groups")) {
    ParameterGroup g;
    g.name = gj.at("name").get<std::string>();
    g.role = group_role_from_string(gj.at("role").get<std::string>());
    g.level = gj.at("level").get<int>();
    for (const auto& aj : gj.at("arrays")) {
      const std::size_t index = aj.at("index").get<std::size_t>();
      if (index >= num_arrays) throw IoError("checkpoint: array index out of range");
      ParamArray& p = c.params[index];
      p.name = aj.at("name").get<std::string>();
      p.shape = aj.at("shape").get<std::vector<std::int64_t>>();
      const std::uint64_t count = aj.at("count").get<std::uint64_t>();
      const std::uint64_t offset = aj.at("offset").get<std::uint64_t>();
      if (payload + (offset + count) * 8 > bytes.size()) throw IoError("checkpoint: truncated payload");
      p.values.resize(count);
      for (std::uint64_t i = 0; i < count; ++i) {
        p.values[i] = std::bit_cast<double>(get_u64(bytes, payload + (offset + i) * 8, 8));
      }
      g.arrays.push_back(index);
    }
    c.frozen.push_back(gj.value("frozen", false));
    c.groups.push_back(std::move(g));
  }
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  const std::string bytes = serialize(checkpoint);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return deserialize(buffer.str());
}

}  // namespace wavesep
