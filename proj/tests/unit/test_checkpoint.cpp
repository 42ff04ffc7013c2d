// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include "unit/helpers.hpp"
#include "wavesep/checkpoint.hpp"
#include "wavesep/error.hpp"
#include "wavesep/separator.hpp"
#include "wavesep/variants.hpp"

using namespace wavesep;

TEST_SUITE("checkpoint") {
  TEST_CASE("save, load, save is byte identical") {
    const auto dir = testing::scratch_dir("checkpoint");
    Separator sep = build_multires_separator(testing::small_spec(4, 4, 1024, 2), MultiResSpec{2, 2});
    const FreezeSpec freeze{Regime::kJ, SkipSubset::kAll, 9};
    apply_freeze(sep, freeze);
    const Checkpoint ck = make_checkpoint(sep, freeze, {{"note", "x"}});
    save_checkpoint(dir / "a.ckpt", ck);
    const Checkpoint loaded = load_checkpoint(dir / "a.ckpt");
    CHECK(serialize(loaded) == serialize(ck));
    CHECK(loaded.architecture == ck.architecture);
    CHECK(loaded.freeze == freeze);
    CHECK(loaded.metadata.at("note") == "x");
  }

  TEST_CASE("restored separators compute the same outputs") {
    std::mt19937_64 gen(3);
    Separator sep = build_res_path_separator(testing::small_spec(4, 4, 1024), ResPathSpec{2, 3});
    const FreezeSpec freeze{Regime::kU, SkipSubset::kAll, 0};
    const Separator restored = restore_separator(deserialize(serialize(make_checkpoint(sep, freeze))));
    const Waveform mix = testing::random_waveform(gen, 1, 1024);
    CHECK(forward(sep, mix)[0] == forward(restored, mix)[0]);
  }

  TEST_CASE("header starts with magic and version") {
    const std::string bytes =
        serialize(make_checkpoint(build_separator(testing::small_spec(2, 2, 64)), FreezeSpec{}));
    CHECK(bytes.substr(0, 8) == "WSEPCKPT");
    CHECK(static_cast<unsigned char>(bytes[8]) == Checkpoint::kFormatVersion);
  }

  TEST_CASE("corrupt input is rejected") {
    std::string bytes = serialize(make_checkpoint(build_separator(testing::small_spec(2, 2, 64)), FreezeSpec{}));
    CHECK_THROWS_AS(deserialize(bytes.substr(0, bytes.size() - 3)), IoError);
    std::string bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(deserialize(bad), IoError);
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/file.ckpt"), IoError);
  }
}
