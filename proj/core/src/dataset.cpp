// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "wavesep/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wavesep/error.hpp"
#include "wavesep/resample.hpp"
#include "wavesep/wav.hpp"

namespace wavesep {
namespace {

namespace fs = std::filesystem;

constexpr double kMixTolerance = 1e-4;

Waveform to_channels(const Waveform& x, int channels) {
  if (x.rows() == channels) return x;
  if (x.rows() == 1) return x.replicate(channels, 1);
  const Signal mean = x.colwise().mean();
  return mean.replicate(channels, 1);
}

Waveform stem_sum(const std::vector<Waveform>& stems) {
  Waveform sum = stems.front();
  for (std::size_t k = 1; k < stems.size(); ++k) sum += stems[k];
  return sum;
}

std::vector<fs::path> track_dirs(const fs::path& root) {
  std::vector<fs::path> dirs;
  if (!fs::is_directory(root)) return dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

Waveform load_audio(const fs::path& file, int channels) {
  WavData wav = read_wav(file);
  Waveform x = to_channels(wav.samples, channels);
  if (wav.sample_rate != kSampleRate) {
    try {
      x = resample(x, wav.sample_rate, kSampleRate);
    } catch (const DataError& e) {
      throw DataError(file.string() + ": sample-rate conversion failed: " + e.what());
    }
  }
  return x;
}

std::vector<Track> load_partition(const fs::path& dir, const LoadOptions& options,
                                  std::vector<std::string>& problems) {
  std::vector<Track> tracks;
  for (const fs::path& track_dir : track_dirs(dir)) {
    std::vector<std::string> missing;
    for (std::string_view stem : kStemNames) {
      if (!fs::exists(track_dir / (std::string(stem) + ".wav"))) missing.emplace_back(stem);
    }
    if (!missing.empty()) {
      std::string line = track_dir.filename().string() + " (missing";
      for (const auto& m : missing) line += " " + m + ".wav";
      problems.push_back(line + ")");
      continue;
    }
    Track t;
    t.name = track_dir.filename().string();
    for (std::string_view stem : kStemNames) {
      t.stems.push_back(load_audio(track_dir / (std::string(stem) + ".wav"), options.channels));
    }
    const bool aligned = std::all_of(t.stems.begin(), t.stems.end(), [&](const Waveform& s) {
      return s.cols() == t.stems.front().cols();
    });
    if (!aligned) {
      problems.push_back(t.name + " (stem lengths differ)");
      continue;
    }
    const Waveform sum = stem_sum(t.stems);
    const fs::path mix_file = track_dir / "mixture.wav";
    if (fs::exists(mix_file)) {
      Waveform mix = load_audio(mix_file, options.channels);
      const bool additive =
          mix.cols() == sum.cols() && (mix - sum).cwiseAbs().maxCoeff() <= kMixTolerance;
      t.mixture = additive ? mix : sum;
    } else {
      t.mixture = sum;
    }
    tracks.push_back(std::move(t));
  }
  return tracks;
}

void shuffle(std::vector<std::size_t>& order, Rng& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[uniform_index(rng, i)]);
  }
}

// Moves a random quarter of `train` into `validation`.
void split_validation(std::vector<Track>& train, std::vector<Track>& validation, std::uint64_t seed) {
  const std::size_t n = train.size();
  if (n < 2) return;
  std::size_t n_val = static_cast<std::size_t>(std::llround(0.25 * static_cast<double>(n)));
  n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng = derive_rng(seed, "validation-split");
  shuffle(order, rng);
  std::vector<bool> is_val(n, false);
  for (std::size_t i = 0; i < n_val; ++i) is_val[order[i]] = true;
  std::vector<Track> kept;
  for (std::size_t i = 0; i < n; ++i) {
    (is_val[i] ? validation : kept).push_back(std::move(train[i]));
  }
  train = std::move(kept);
}

// One-pole-pair band-pass (RBJ biquad, constant peak gain).
class BandPass {
 public:
  BandPass(double center_hz, double q) {
    const double w0 = 2.0 * std::numbers::pi * center_hz / kSampleRate;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    b0_ = alpha / a0;
    b2_ = -alpha / a0;
    a1_ = -2.0 * std::cos(w0) / a0;
    a2_ = (1.0 - alpha) / a0;
  }
  double operator()(double x) {
    const double y = b0_ * x + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double b0_, b2_, a1_, a2_;
  double x1_ = 0, x2_ = 0, y1_ = 0, y2_ = 0;
};

Track synth_track(std::uint64_t seed, int index, Eigen::Index n, int channels) {
  Rng rng = derive_rng(seed, "synth-track-" + std::to_string(index));
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double fs_hz = kSampleRate;

  // Vocals: a sequence of harmonic notes.
  std::vector<double> vocals(static_cast<std::size_t>(n), 0.0);
  {
    const double am_rate = uniform(rng, 3.0, 6.0);
    const double brightness = uniform(rng, 0.5, 0.9);
    Eigen::Index t = 0;
    double phase = 0.0;
    while (t < n) {
      const auto note_len = static_cast<Eigen::Index>(uniform(rng, 0.25, 0.6) * fs_hz);
      const double f0 = 180.0 * std::exp(uniform01(rng) * std::log(520.0 / 180.0));
      const double level = uniform(rng, 0.6, 1.0);
      for (Eigen::Index i = 0; i < note_len && t < n; ++i, ++t) {
        const double u = static_cast<double>(i) / static_cast<double>(note_len);
        const double env = 0.35 + 0.65 * std::sin(std::numbers::pi * u);
        const double am = 1.0 - 0.3 * (0.5 + 0.5 * std::sin(kTwoPi * am_rate * t / fs_hz));
        double s = 0.0;
        double amp = 1.0;
        for (int h = 1; h <= 6; ++h) {
          s += amp * std::sin(h * phase);
          amp *= brightness;
        }
        vocals[static_cast<std::size_t>(t)] = 0.12 * level * env * am * s;
        phase = std::fmod(phase + kTwoPi * f0 / fs_hz, kTwoPi);
      }
    }
  }
  // Silence whole, aligned seconds.
  const auto seconds = static_cast<std::size_t>(n / kSampleRate);
  std::vector<std::size_t> silent;
  {
    const std::size_t want = 1 + uniform_index(rng, std::max<std::size_t>(1, seconds / 8));
    std::vector<std::size_t> order(seconds);
    for (std::size_t i = 0; i < seconds; ++i) order[i] = i;
    shuffle(order, rng);
    silent.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(want, seconds)));
    std::sort(silent.begin(), silent.end());
    for (std::size_t s : silent) {
      std::fill_n(vocals.begin() + static_cast<std::ptrdiff_t>(s * kSampleRate), kSampleRate, 0.0);
    }
  }

  // Accompaniment components, each with a per-channel gain.
  std::vector<std::vector<double>> acc(static_cast<std::size_t>(channels),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
  auto pan_gains = [&](double spread) {
    std::vector<double> g(static_cast<std::size_t>(channels), 1.0);
    if (channels > 1) {
      const double p = uniform(rng, -spread, spread);
      for (int c = 0; c < channels; ++c) g[c] = 1.0 + (c % 2 == 0 ? p : -p);
    }
    return g;
  };
  {
    // Bass line, changing every two seconds.
    const auto gains = pan_gains(0.1);
    double phase = 0.0;
    double f = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (t % (2 * kSampleRate) == 0) f = uniform(rng, 40.0, 110.0);
      phase = std::fmod(phase + kTwoPi * f / fs_hz, kTwoPi);
      const double s = 0.14 * (std::sin(phase) + 0.3 * std::sin(2 * phase));
      for (int c = 0; c < channels; ++c) acc[c][t] += gains[c] * s;
    }
  }
  {
    // Three-tone chords, changing every second.
    const auto gains = pan_gains(0.3);
    std::array<double, 3> phases{}, freqs{};
    for (Eigen::Index t = 0; t < n; ++t) {
      if (t % kSampleRate == 0) {
        const double root = uniform(rng, 150.0, 300.0);
        freqs = {root, root * 1.26, root * 1.5};
      }
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        phases[k] = std::fmod(phases[k] + kTwoPi * freqs[k] / fs_hz, kTwoPi);
        s += std::sin(phases[k]);
      }
      for (int c = 0; c < channels; ++c) acc[c][t] += gains[c] * 0.04 * s;
    }
  }
  {
    // Percussive band-passed noise bursts on a steady beat.
    const auto gains = pan_gains(0.4);
    BandPass filter(uniform(rng, 1500.0, 5000.0), 0.8);
    const double beat = uniform(rng, 0.25, 0.5) * fs_hz;
    for (Eigen::Index t = 0; t < n; ++t) {
      const double since = std::fmod(static_cast<double>(t), beat) / fs_hz;
      const double env = std::exp(-since * 30.0);
      const double s = 0.25 * env * filter(normal01(rng));
      for (int c = 0; c < channels; ++c) acc[c][t] += gains[c] * s;
    }
  }

  Track track;
  track.name = "synth_" + std::string(index < 10 ? "00" : index < 100 ? "0" : "") + std::to_string(index);
  track.sample_rate = kSampleRate;
  track.stems.assign(2, Waveform(channels, n));
  for (int c = 0; c < channels; ++c) {
    for (Eigen::Index t = 0; t < n; ++t) {
      track.stems[0](c, t) = vocals[static_cast<std::size_t>(t)];
      track.stems[1](c, t) = acc[c][t];
    }
  }
  track.mixture = stem_sum(track.stems);
  const double peak = track.mixture.cwiseAbs().maxCoeff();
  if (peak > 0.99) {
    const double g = 0.99 / peak;
    for (auto& s : track.stems) s *= g;
    track.mixture = stem_sum(track.stems);
  }
  track.silent_vocal_seconds = std::move(silent);
  return track;
}

}  // namespace

void validate_track(const Track& track) {
  if (track.stems.size() != static_cast<std::size_t>(kNumStems)) {
    throw DataError(track.name + ": expected " + std::to_string(kNumStems) + " stems");
  }
  for (const auto& s : track.stems) {
    if (s.rows() != track.mixture.rows() || s.cols() != track.mixture.cols()) {
      throw DataError(track.name + ": stem shape differs from mixture");
    }
  }
  if (track.sample_rate != kSampleRate) throw DataError(track.name + ": sample rate is not 22050 Hz");
  if ((track.mixture - stem_sum(track.stems)).cwiseAbs().maxCoeff() > kMixTolerance) {
    throw DataError(track.name + ": mixture is not the sum of its stems");
  }
}

DatasetSplit load_dataset(const fs::path& root, std::uint64_t split_seed, const LoadOptions& options) {
  if (!fs::is_directory(root)) throw DataError("dataset root " + root.string() + " is not a directory");
  const bool partitioned = fs::is_directory(root / "train");
  std::vector<std::string> problems;
  DatasetSplit split;
  split.split_seed = split_seed;
  split.train = load_partition(partitioned ? root / "train" : root, options, problems);
  if (partitioned) split.test = load_partition(root / "test", options, problems);
  if (!problems.empty()) {
    std::string msg = "ingestion failed for " + std::to_string(problems.size()) + " track(s):";
    for (const auto& p : problems) msg += " " + p + ";";
    throw DataError(msg);
  }
  if (split.train.empty()) throw DataError("no tracks found under " + root.string());
  split_validation(split.train, split.validation, split_seed);
  for (const auto& extra : options.extra_train_roots) {
    auto more = load_partition(fs::is_directory(extra / "train") ? extra / "train" : extra, options, problems);
    if (!problems.empty()) throw DataError("ingestion failed in " + extra.string() + ": " + problems.front());
    for (auto& t : more) split.train.push_back(std::move(t));
  }
  return split;
}

void export_dataset(const DatasetSplit& split, const fs::path& root) {
  auto write_tracks = [](const std::vector<Track>& tracks, const fs::path& dir) {
    for (const Track& t : tracks) {
      const fs::path d = dir / t.name;
      fs::create_directories(d);
      write_wav(d / "mixture.wav", t.mixture, t.sample_rate);
      for (std::size_t k = 0; k < t.stems.size(); ++k) {
        write_wav(d / (std::string(kStemNames[k]) + ".wav"), t.stems[k], t.sample_rate);
      }
    }
  };
  write_tracks(split.train, root / "train");
  write_tracks(split.validation, root / "train");
  write_tracks(split.test, root / "test");
}

DatasetSplit synth_dataset(std::uint64_t seed, int n_tracks, double duration_seconds, int channels) {
  if (n_tracks < 3) throw DataError("synth_dataset: need at least 3 tracks");
  if (duration_seconds < 2.0) throw DataError("synth_dataset: duration must be >= 2 s");
  if (channels < 1) throw DataError("synth_dataset: channels must be >= 1");
  const auto n = static_cast<Eigen::Index>(std::llround(duration_seconds * kSampleRate));
  std::vector<Track> tracks;
  for (int i = 0; i < n_tracks; ++i) tracks.push_back(synth_track(seed, i, n, channels));

  const auto n_total = static_cast<std::size_t>(n_tracks);
  const std::size_t n_test = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(n_total / 3.0)));
  std::vector<std::size_t> order(n_total);
  for (std::size_t i = 0; i < n_total; ++i) order[i] = i;
  Rng rng = derive_rng(seed, "test-split");
  shuffle(order, rng);
  std::vector<bool> is_test(n_total, false);
  for (std::size_t i = 0; i < n_test; ++i) is_test[order[i]] = true;

  DatasetSplit split;
  split.split_seed = seed;
  for (std::size_t i = 0; i < n_total; ++i) {
    (is_test[i] ? split.test : split.train).push_back(std::move(tracks[i]));
  }
  split_validation(split.train, split.validation, seed);
  return split;
}

Snippet sample_snippet(const Track& track, int length, Rng& rng) {
  if (length < 1 || track.length() < length) {
    throw DataError(track.name + ": track of " + std::to_string(track.length()) +
                    " samples is shorter than snippet length " + std::to_string(length));
  }
  const auto span = static_cast<std::uint64_t>(track.length() - length + 1);
  Snippet s;
  s.offset = static_cast<Eigen::Index>(uniform_index(rng, span));
  s.mix = track.mixture.middleCols(s.offset, length);
  for (const auto& stem : track.stems) s.stems.push_back(stem.middleCols(s.offset, length));
  return s;
}

Snippet augment(Snippet snippet, Rng& rng) {
  std::vector<double> factors;
  for (std::size_t k = 0; k < snippet.stems.size(); ++k) {
    factors.push_back(uniform(rng, kAugmentMinScale, kAugmentMaxScale));
  }
  return augment(std::move(snippet), factors);
}

Snippet augment(Snippet snippet, std::span<const double> factors) {
  if (factors.size() != snippet.stems.size()) {
    throw ContractError("augment: one factor per stem required");
  }
  for (std::size_t k = 0; k < factors.size(); ++k) snippet.stems[k] *= factors[k];
  snippet.mix = stem_sum(snippet.stems);
  return snippet;
}

}  // namespace wavesep
