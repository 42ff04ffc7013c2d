// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>

#include "wavesep/signal.hpp"

namespace wavesep {

enum class SampleFormat { kPcm16, kFloat32 };

struct WavData {
  int sample_rate = 0;
  Waveform samples;  // [channels, frames], full scale is [-1, 1]
};

// Reads uncompressed RIFF/WAVE: 16/24/32-bit PCM or 32/64-bit float, plain or
// WAVE_FORMAT_EXTENSIBLE. Throws DataError on anything else.
WavData read_wav(const std::filesystem::path& path);

void write_wav(const std::filesystem::path& path, const Waveform& samples, int sample_rate,
               SampleFormat format = SampleFormat::kFloat32);

}  // namespace wavesep
