// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "wavesep/architecture.hpp"
#include "wavesep/signal.hpp"

namespace wavesep::testing {

inline ArchitectureSpec small_spec(int levels = 4, int filters = 8, int length = 1024, int channels = 1) {
  ArchitectureSpec s;
  s.num_levels = levels;
  s.extra_filters_per_level = filters;
  s.kernel_down = 15;
  s.kernel_up = 5;
  s.input_length = length;
  s.audio_channels = channels;
  s.num_sources = 2;
  s.seed = 7;
  return s;
}

inline Waveform random_waveform(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols, double scale = 0.5) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Waveform w(rows, cols);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = u(gen);
  return w;
}

// Fresh empty directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("wavesep_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double relative_error(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace wavesep::testing
