// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavesep/rng.hpp"
#include "wavesep/signal.hpp"

namespace wavesep {

inline constexpr int kSampleRate = 22050;
inline constexpr int kNumStems = 2;
inline constexpr std::array<std::string_view, kNumStems> kStemNames = {"vocals", "accompaniment"};

// A mixture with its ground-truth stems, all [channels, N] at sample_rate.
struct Track {
  std::string name;
  int sample_rate = kSampleRate;
  Waveform mixture;
  std::vector<Waveform> stems;  // ordered as kStemNames
  // Whole seconds where the generator silenced the vocals; empty for
  // ingested audio.
  std::vector<std::size_t> silent_vocal_seconds;

  Eigen::Index length() const { return mixture.cols(); }
  int channels() const { return static_cast<int>(mixture.rows()); }
};

struct DatasetSplit {
  std::vector<Track> train;
  std::vector<Track> validation;
  std::vector<Track> test;
  std::uint64_t split_seed = 0;
};

struct LoadOptions {
  int channels = 2;  // mono files are duplicated, wider ones averaged down
  // Extra corpora whose tracks are appended to the training split only.
  std::vector<std::filesystem::path> extra_train_roots;
};

// Reads `<root>/<track>/{mixture,vocals,accompaniment}.wav`. If `root/train`
// exists, it and `root/test` are used as the training and test partitions;
// otherwise every track folder under root belongs to the training partition.
// A random quarter of the training partition becomes the validation split.
// Mixtures that are not the sum of their stems are replaced by the sum.
DatasetSplit load_dataset(const std::filesystem::path& root, std::uint64_t split_seed,
                          const LoadOptions& options = {});

// Writes `<root>/train/<track>/...` (training and validation tracks) and
// `<root>/test/<track>/...` as 32-bit float WAV.
void export_dataset(const DatasetSplit& split, const std::filesystem::path& root);

// Desk-scale stand-in corpus. Vocals are harmonic notes with amplitude
// modulation and at least one fully silent aligned second per track;
// accompaniment is band-passed noise bursts over bass and chord tones.
// Requires n_tracks >= 3 and duration >= 2 s.
DatasetSplit synth_dataset(std::uint64_t seed, int n_tracks, double duration_seconds, int channels = 2);

struct Snippet {
  Waveform mix;
  std::vector<Waveform> stems;
  Eigen::Index offset = 0;
};

// Aligned slices at a uniformly random offset in [0, N - length]. Throws
// DataError if the track is shorter than `length`.
Snippet sample_snippet(const Track& track, int length, Rng& rng);

inline constexpr double kAugmentMinScale = 0.7;
inline constexpr double kAugmentMaxScale = 1.0;

// Scales each stem by an independent factor from [0.7, 1.0] and recomputes
// the mix as the sum of the scaled stems.
Snippet augment(Snippet snippet, Rng& rng);
Snippet augment(Snippet snippet, std::span<const double> factors);

// Checks the Track invariants; throws DataError.
void validate_track(const Track& track);

}  // namespace wavesep
