// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <benchmark/benchmark.h>

#include "wavesep/dataset.hpp"
#include "wavesep/losses.hpp"
#include "wavesep/metrics.hpp"
#include "wavesep/separator.hpp"

namespace {

using namespace wavesep;

ArchitectureSpec bench_spec(int levels, int filters, int length) {
  ArchitectureSpec s;
  s.num_levels = levels;
  s.extra_filters_per_level = filters;
  s.input_length = length;
  s.audio_channels = 1;
  return s;
}

Waveform noise(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng = derive_rng(seed, "bench");
  Waveform w(rows, cols);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = uniform(rng, -0.5, 0.5);
  return w;
}

void BM_Conv(benchmark::State& state) {
  const int channels = static_cast<int>(state.range(0));
  const int length = static_cast<int>(state.range(1));
  std::vector<ParamArray> params{{"w", {channels, channels, 15}, std::vector<double>(channels * channels * 15, 0.01)},
                                 {"b", {channels}, std::vector<double>(channels, 0.0)}};
  const ConvLayer layer{0, 1, channels, channels, 15, Activation::kLeakyRelu};
  const Signal x = noise(channels, length, 1);
  for (auto _ : state) benchmark::DoNotOptimize(conv_forward(layer, params, x));
  state.SetItemsProcessed(state.iterations() * length);
}
BENCHMARK(BM_Conv)->Args({8, 2048})->Args({32, 512})->Args({24, 16384});

void BM_Forward(benchmark::State& state) {
  const auto spec = bench_spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                               static_cast<int>(state.range(2)));
  const Separator sep = build_separator(spec);
  const Waveform mix = noise(1, spec.input_length, 2);
  for (auto _ : state) benchmark::DoNotOptimize(forward(sep, mix));
  state.SetItemsProcessed(state.iterations() * spec.input_length);
}
BENCHMARK(BM_Forward)->Args({4, 8, 2048})->Args({10, 24, 16384})->Unit(benchmark::kMillisecond);

void BM_TrainStep(benchmark::State& state) {
  const auto spec = bench_spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                               static_cast<int>(state.range(2)));
  const Separator sep = build_separator(spec);
  std::vector<Example> batch;
  for (int i = 0; i < 4; ++i) {
    batch.push_back({noise(1, spec.input_length, 10 + i),
                     {noise(1, spec.input_length, 20 + i), noise(1, spec.input_length, 30 + i)}});
  }
  ParamGrads grads = zero_gradients(sep.params());
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_gradient(sep, batch, LossSettings{}, grads));
  state.SetItemsProcessed(state.iterations() * 4);
}
BENCHMARK(BM_TrainStep)->Args({4, 8, 2048})->Args({4, 8, 1024})->Unit(benchmark::kMillisecond);

void BM_Sdr(benchmark::State& state) {
  const Waveform r = noise(2, 22050, 3);
  const Waveform e = r + 0.1 * noise(2, 22050, 4);
  for (auto _ : state) benchmark::DoNotOptimize(sdr(r, e));
}
BENCHMARK(BM_Sdr);

}  // namespace
BENCHMARK_MAIN();
