// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include "unit/helpers.hpp"
#include "wavesep/error.hpp"
#include "wavesep/separator.hpp"

using namespace wavesep;

namespace {

// Independent count from the layer table: encoder convs, bottleneck,
// decoder convs on [upsampled, skip], and the 1x1 output layer on
// [decoder, mix].
std::size_t expected_baseline_params(int L, int fc, int kd, int ku, int channels, int sources) {
  std::size_t total = 0;
  auto conv = [&](int in, int out, int k) { total += static_cast<std::size_t>(in * out * k + out); };
  for (int l = 1; l <= L; ++l) conv(l == 1 ? channels : fc * (l - 1), fc * l, kd);
  conv(fc * L, fc * (L + 1), kd);
  for (int l = L; l >= 1; --l) conv(fc * (l + 1) + fc * l, fc * l, ku);
  conv(fc + channels, (sources - 1) * channels, 1);
  return total;
}

}  // namespace

TEST_SUITE("architecture") {
  TEST_CASE("validation names the violated field") {
    ArchitectureSpec s = testing::small_spec();
    s.input_length = 1000;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("architecture.input_length"), ConfigError);
    s = testing::small_spec();
    s.num_levels = 0;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("architecture.num_levels"), ConfigError);
    s = testing::small_spec();
    s.kernel_down = 4;
    CHECK_THROWS_AS(s.validate(), ConfigError);
  }

  TEST_CASE("json round trip and required fields") {
    ArchitectureSpec s = testing::small_spec();
    s.variant = ResPathSpec{2, 3};
    CHECK(architecture_from_json(to_json(s), "architecture") == s);
    nlohmann::json j = to_json(s);
    j.erase("num_levels");
    CHECK_THROWS_WITH_AS(architecture_from_json(j, "architecture"), doctest::Contains("architecture.num_levels"),
                         ConfigError);
  }

  TEST_CASE("tiny model parameter count") {
    ArchitectureSpec s;
    s.num_levels = 1;
    s.extra_filters_per_level = 1;
    s.kernel_down = 3;
    s.kernel_up = 5;
    s.input_length = 8;
    s.audio_channels = 1;
    s.num_sources = 2;
    const Separator sep = build_separator(s);
    // 4 (encoder) + 8 (bottleneck) + 16 (decoder) + 3 (output)
    CHECK(count_parameters(sep) == 31);
    CHECK(expected_baseline_params(1, 1, 3, 5, 1, 2) == 31);
  }

  TEST_CASE("baseline counts follow the layer table") {
    for (auto [L, fc, ch] : {std::tuple{4, 8, 1}, std::tuple{3, 5, 2}, std::tuple{10, 24, 2}}) {
      ArchitectureSpec s = testing::small_spec(L, fc, 1 << L, ch);
      CHECK(count_parameters(build_separator(s)) == expected_baseline_params(L, fc, 15, 5, ch, 2));
    }
  }

  TEST_CASE("every array belongs to exactly one group") {
    const Separator sep = build_separator(testing::small_spec());
    std::vector<int> owners(sep.params().size(), 0);
    for (const auto& g : sep.groups()) {
      for (std::size_t a : g.arrays) ++owners[a];
    }
    for (int o : owners) CHECK(o == 1);
    CHECK(sep.find_group("encoder[1]").has_value());
    CHECK(sep.find_group("bottleneck").has_value());
    CHECK(sep.find_group("decoder[4]").has_value());
    CHECK(sep.find_group("output_layer").has_value());
    CHECK_FALSE(sep.find_group("encoder[5]").has_value());
  }

  TEST_CASE("output keeps length and sums to the mixture") {
    std::mt19937_64 gen(1);
    for (int channels : {1, 2}) {
      const ArchitectureSpec s = testing::small_spec(4, 8, 512, channels);
      const Separator sep = build_separator(s);
      const Waveform mix = testing::random_waveform(gen, channels, 512);
      const SourceEstimates est = forward(sep, mix);
      REQUIRE(est.size() == 2);
      CHECK(est[0].cols() == 512);
      CHECK(est[0].rows() == channels);
      CHECK(((est[0] + est[1]) - mix).norm() / mix.norm() < 1e-12);
    }
  }

  TEST_CASE("forward rejects mismatched input") {
    const Separator sep = build_separator(testing::small_spec());
    CHECK_THROWS_AS(forward(sep, Waveform::Zero(1, 1000)), ShapeError);
    CHECK_THROWS_AS(forward(sep, Waveform::Zero(2, 1024)), ShapeError);
  }

  TEST_CASE("initialization is seeded and bounded") {
    const ArchitectureSpec s = testing::small_spec();
    const Separator a = build_separator(s);
    const Separator b = build_separator(s);
    ArchitectureSpec other = s;
    other.seed = 8;
    const Separator c = build_separator(other);
    bool differs = false;
    for (std::size_t i = 0; i < a.params().size(); ++i) {
      CHECK(a.params()[i].values == b.params()[i].values);
      differs |= a.params()[i].values != c.params()[i].values;
    }
    CHECK(differs);
    // encoder[1] weight: fan-in = channels * kernel, leaky gain.
    const auto& w = a.params()[a.groups()[*a.find_group("encoder[1]")].arrays[0]];
    const double bound = std::sqrt(2.0 / (1.0 + kLeakySlope * kLeakySlope)) * std::sqrt(3.0 / 15.0);
    for (double v : w.values) CHECK(std::abs(v) <= bound);
  }

  TEST_CASE("skip subsets") {
    const auto first = active_skips(10, SkipSubset::kFirst3);
    const auto last = active_skips(10, SkipSubset::kLast3);
    for (int l = 1; l <= 10; ++l) {
      CHECK(first[static_cast<std::size_t>(l)] == (l <= 3));
      CHECK(last[static_cast<std::size_t>(l)] == (l >= 8));
    }
    CHECK_THROWS_AS(skip_subset_from_string("middle"), ConfigError);
  }
}
