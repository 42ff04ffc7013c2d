// Copyright 2026 The wavesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <algorithm>

#include "unit/helpers.hpp"
#include "unit/sdr_oracle.hpp"
#include "wavesep/error.hpp"
#include "wavesep/evaluate.hpp"
#include "wavesep/metrics.hpp"

using namespace wavesep;

namespace {

// r + n with n orthogonal to r and |n|^2 = ratio * |r|^2.
Waveform add_orthogonal_noise(const Waveform& r, std::mt19937_64& gen, double ratio) {
  Waveform n = testing::random_waveform(gen, r.rows(), r.cols());
  n -= (n.cwiseProduct(r).sum() / r.squaredNorm()) * r;
  n *= std::sqrt(ratio * r.squaredNorm() / n.squaredNorm());
  return r + n;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("sdr closed forms and caps") {
    std::mt19937_64 gen(1);
    const Waveform r = testing::random_waveform(gen, 2, 22050);
    CHECK(*sdr(r, r) == kSdrCapDb);
    CHECK(std::abs(*sdr(r, add_orthogonal_noise(r, gen, 0.01)) - 20.0) < 1e-6);
    const Waveform e = add_orthogonal_noise(r, gen, 1.0) - r;
    CHECK(*sdr(r, e) == -kSdrCapDb);
    CHECK_FALSE(sdr(Waveform::Zero(2, 100), r.leftCols(100)).has_value());
    CHECK_THROWS_AS(sdr(r, r.leftCols(10)), ShapeError);
  }

  TEST_CASE("sdr agrees with the gain-search oracle") {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Waveform r = testing::random_waveform(gen, 1, 4096);
      const Waveform e = u(gen) * r + u(gen) * testing::random_waveform(gen, 1, 4096);
      worst = std::max(worst, std::abs(*sdr(r, e) - testing::brute_force_sdr(r, e)));
    }
    CHECK(worst < 1e-4);
  }

  TEST_CASE("sdr ignores the estimate gain") {
    std::mt19937_64 gen(3);
    const Waveform r = testing::random_waveform(gen, 2, 2048);
    const Waveform e = r + 0.3 * testing::random_waveform(gen, 2, 2048);
    for (double a : {0.1, 1.0, 10.0}) CHECK(std::abs(*sdr(r, a * e) - *sdr(r, e)) < 1e-9);
  }

  TEST_CASE("segments are whole seconds") {
    std::mt19937_64 gen(4);
    const Waveform r = testing::random_waveform(gen, 1, 10 * 100 + 50);
    const SegmentSdr s = segment_sdr(r, r, 100);
    CHECK(s.values.size() == 10);
    CHECK(s.excluded.empty());
    Waveform silent = r;
    for (int w : {2, 5, 7}) silent.middleCols(w * 100, 100).setZero();
    const SegmentSdr t = segment_sdr(silent, r, 100);
    CHECK(t.excluded == std::vector<std::size_t>{2, 5, 7});
    CHECK(t.values.size() == 7);
    CHECK(t.segments == std::vector<std::size_t>{0, 1, 3, 4, 6, 8, 9});
  }

  TEST_CASE("concatenated tracks yield the union of their segments") {
    std::mt19937_64 gen(5);
    const Waveform r1 = testing::random_waveform(gen, 1, 300), r2 = testing::random_waveform(gen, 1, 200);
    const Waveform e1 = r1 + testing::random_waveform(gen, 1, 300), e2 = r2 + testing::random_waveform(gen, 1, 200);
    Waveform r(1, 500), e(1, 500);
    r << r1, r2;
    e << e1, e2;
    auto joined = segment_sdr(r, e, 100).values;
    auto a = segment_sdr(r1, e1, 100).values;
    const auto b = segment_sdr(r2, e2, 100).values;
    a.insert(a.end(), b.begin(), b.end());
    CHECK(joined == a);
  }

  TEST_CASE("aggregate statistics") {
    const std::vector<double> v{1, 2, 3, 4, 100};
    const Stats s = aggregate_stats(v);
    CHECK(s.median == 3.0);
    CHECK(s.mad == 1.0);  // deviations {2, 1, 0, 1, 97}
    CHECK(s.mean == 22.0);
    CHECK(s.sd == doctest::Approx(std::sqrt((21.0 * 21 + 20 * 20 + 19 * 19 + 18 * 18 + 78 * 78) / 5)));
    const std::vector<double> one{4.5};
    const Stats single = aggregate_stats(one);
    CHECK(single.median == 4.5);
    CHECK(single.mean == 4.5);
    CHECK(single.mad == 0.0);
    CHECK(single.sd == 0.0);
    CHECK_THROWS_AS(aggregate_stats(std::vector<double>{}), EvaluationError);
    const std::vector<double> even{4, 1, 3, 2};
    CHECK(aggregate_stats(even).median == 2.5);
  }

  TEST_CASE("statistics ignore ordering") {
    std::mt19937_64 gen(6);
    std::normal_distribution<double> n(0.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> v(1 + trial);
      for (double& x : v) x = n(gen);
      std::vector<double> p = v;
      std::shuffle(p.begin(), p.end(), gen);
      const Stats a = aggregate_stats(v), b = aggregate_stats(p);
      CHECK(a.median == b.median);
      CHECK(a.mad == b.mad);
      CHECK(a.mean == b.mean);
      CHECK(a.sd == b.sd);
    }
  }

  TEST_CASE("an oracle separator hits the cap everywhere") {
    const DatasetSplit d = synth_dataset(3, 3, 3.0, 1);
    std::vector<SourceEstimates> perfect;
    for (const Track& t : d.test) perfect.push_back(t.stems);
    const EvalReport r = score_estimates(d.test, perfect);
    for (const SourceReport& s : r.sources) {
      for (double v : s.pooled) CHECK(v == kSdrCapDb);
    }
    std::size_t silent = 0;
    for (const Track& t : d.test) silent += t.silent_vocal_seconds.size();
    CHECK(r.source("vocals").excluded == silent);
    CHECK(r.source("accompaniment").excluded == 0);
  }

  TEST_CASE("evaluation tiles the track and reports round trip") {
    const DatasetSplit d = synth_dataset(3, 3, 2.0, 1);
    ArchitectureSpec spec = testing::small_spec(3, 4, 1000 - 1000 % 8);
    const Separator sep = build_separator(spec);
    const SourceEstimates est = separate_track(sep, d.test[0].mixture, 1);
    CHECK(est[0].cols() == d.test[0].length());
    // Each window is separated on its own.
    const Waveform first = d.test[0].mixture.leftCols(spec.input_length);
    CHECK(est[0].leftCols(spec.input_length) == forward(sep, first)[0]);
    EvalReport r = evaluate_model(sep, d.test, 1);
    r.model = "U1";
    r.regime = "U";
    const EvalReport back = eval_report_from_json(to_json(r));
    CHECK(to_json(back) == to_json(r));
    CHECK_THROWS_AS(evaluate_model(sep, {}, 1), EvaluationError);
    CHECK_THROWS_AS(evaluate_model(sep, d.test, 0), ArgumentError);
  }
}
