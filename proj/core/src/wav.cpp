// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "wavesep/error.hpp"

namespace wavesep {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put(std::string& out, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
  const std::string where = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw DataError(where + ": not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw DataError(where + ": short fmt chunk");
      format = le16(chunk + 8);
      channels = le16(chunk + 10);
      rate = le32(chunk + 12);
      bits = le16(chunk + 22);
      if (format == kFormatExtensible) {
        if (avail < 40) throw DataError(where + ": short extensible fmt chunk");
        format = le16(chunk + 8 + 24);  // first two bytes of the sub-format GUID
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = avail;
    }
    pos = body + size + (size & 1);
  }
  if (channels == 0 || rate == 0) throw DataError(where + ": missing fmt chunk");
  if (data == nullptr) throw DataError(where + ": missing data chunk");

  const std::size_t sample_bytes = bits / 8;
  const bool supported = (format == kFormatPcm && (bits == 16 || bits == 24 || bits == 32)) ||
                         (format == kFormatFloat && (bits == 32 || bits == 64));
  if (!supported) {
    throw DataError(where + ": unsupported sample format " + std::to_string(format) + "/" +
                    std::to_string(bits) + " bit");
  }
  const std::size_t frames = data_size / (sample_bytes * channels);
  WavData out;
  out.sample_rate = static_cast<int>(rate);
  out.samples.resize(channels, static_cast<Eigen::Index>(frames));
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + (f * channels + c) * sample_bytes;
      double v = 0.0;
      if (format == kFormatPcm) {
        if (bits == 16) {
          v = static_cast<std::int16_t>(le16(p)) / 32768.0;
        } else if (bits == 24) {
          std::int32_t s = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
          if (s & 0x800000) s -= 0x1000000;
          v = s / 8388608.0;
        } else {
          v = static_cast<std::int32_t>(le32(p)) / 2147483648.0;
        }
      } else if (bits == 32) {
        v = std::bit_cast<float>(le32(p));
      } else {
        const std::uint64_t lo = le32(p), hi = le32(p + 4);
        v = std::bit_cast<double>(lo | (hi << 32));
      }
      out.samples(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(f)) = v;
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const Waveform& samples, int sample_rate,
               SampleFormat format) {
  const auto channels = static_cast<std::uint32_t>(samples.rows());
  const auto frames = static_cast<std::uint32_t>(samples.cols());
  const std::uint32_t bytes_per_sample = format == SampleFormat::kPcm16 ? 2 : 4;
  const std::uint32_t data_size = frames * channels * bytes_per_sample;

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put(out, 36 + data_size, 4);
  out += "WAVEfmt ";
  put(out, 16, 4);
  put(out, format == SampleFormat::kPcm16 ? kFormatPcm : kFormatFloat, 2);
  put(out, channels, 2);
  put(out, static_cast<std::uint32_t>(sample_rate), 4);
  put(out, static_cast<std::uint32_t>(sample_rate) * channels * bytes_per_sample, 4);
  put(out, channels * bytes_per_sample, 2);
  put(out, bytes_per_sample * 8, 2);
  out += "data";
  put(out, data_size, 4);
  for (std::uint32_t f = 0; f < frames; ++f) {
    for (std::uint32_t c = 0; c < channels; ++c) {
      const double v = samples(c, f);
      if (format == SampleFormat::kPcm16) {
        const double clipped = std::clamp(v, -1.0, 32767.0 / 32768.0);
        put(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(clipped * 32768.0))), 2);
      } else {
        put(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4);
      }
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
}

}  // namespace wavesep
