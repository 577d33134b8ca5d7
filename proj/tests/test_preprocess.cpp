#include <catch2/catch_amalgamated.hpp>

#include "rirkit/preprocess.hpp"
#include "rirkit/rng.hpp"
#include "test_helpers.hpp"

using rirkit::Error;
using rirkit::errc;

TEST_CASE("to_mono averages channels per sample", "[preprocess]") {
  std::vector<double> left(16, 1.0), right(16, 0.0);
  auto mono = rirkit::to_mono(rirkit::make_stereo(left, right, 48000));
  REQUIRE(mono.channel_count() == 1);
  REQUIRE(mono.length() == 16);
  REQUIRE(mono.sample_rate == 48000);
  for (double v : mono.samples[0]) CHECK(v == 0.5);

  // identical channels pass through exactly
  std::vector<double> same(20, 0.3);
  auto mono2 = rirkit::to_mono(rirkit::make_stereo(same, same, 44100));
  for (double v : mono2.samples[0]) CHECK(v == 0.3);

  // alternating: L=[1,0], R=[0,1] -> [0.5, 0.5]
  auto mono3 = rirkit::to_mono(rirkit::make_stereo(
      {1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0},
      {0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, 48000));
  for (double v : mono3.samples[0]) CHECK(v == 0.5);

  // mono input is returned unchanged
  auto in = rirkit::make_mono(std::vector<double>(16, 0.7), 8000);
  auto out = rirkit::to_mono(in);
  CHECK(out.samples == in.samples);
}

TEST_CASE("preprocess trims, truncates and normalizes", "[preprocess]") {
  // leading sub-threshold samples removed, then peak normalized to 1
  std::vector<double> x{0.0, 0.0, 0.5, 0.25};
  x.resize(20, 0.1);
  auto [out, rep] = rirkit::preprocess(rirkit::make_mono(x, 48000));
  CHECK(rep.samples_trimmed_leading == 2);
  CHECK_FALSE(rep.truncated);
  CHECK(rep.peak_before_normalize == 0.5);
  CHECK(rep.original_sample_rate == 48000);
  REQUIRE(out.length() == 18);
  CHECK(out.samples[0][0] == 1.0);
  CHECK(out.samples[0][1] == 0.5);
  CHECK(out.samples[0][2] == Catch::Approx(0.2));
}

TEST_CASE("12 s input truncates to 10 s", "[preprocess]") {
  const int fs = 48000;
  std::vector<double> x(static_cast<std::size_t>(12 * fs), 0.0);
  x[0] = 1.0;
  for (std::size_t i = 1; i < x.size(); ++i) x[i] = 0.01;
  auto [out, rep] = rirkit::preprocess(rirkit::make_mono(x, fs));
  CHECK(out.length() == 480000);
  CHECK(rep.truncated);
}

TEST_CASE("already-trimmed unit-peak input is a fixed point", "[preprocess]") {
  std::vector<double> x(32, 0.25);
  x[0] = 1.0;
  auto [out, rep] = rirkit::preprocess(rirkit::make_mono(x, 48000));
  CHECK(rep.samples_trimmed_leading == 0);
  CHECK(out.samples[0] == x);
}

TEST_CASE("preprocess is idempotent", "[preprocess]") {
  rirkit::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(100 + static_cast<std::size_t>(rng.uniform(0, 4000)));
    const std::size_t silence = static_cast<std::size_t>(rng.uniform(0, 50));
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] = i < silence ? 1e-7 * rng.uniform() : rng.uniform(-1.0, 1.0) * 0.8;
    auto [once, r1] = rirkit::preprocess(rirkit::make_mono(x, 48000));
    auto [twice, r2] = rirkit::preprocess(once);
    REQUIRE(twice.length() == once.length());
    CHECK(twice.samples[0] == once.samples[0]);
    CHECK(r2.samples_trimmed_leading == 0);
  }
}

TEST_CASE("degenerate inputs are rejected", "[preprocess]") {
  const auto zeros = rirkit::make_mono(std::vector<double>(64, 0.0), 48000);
  CHECK_THROWS_AS(rirkit::preprocess(zeros), Error);

  // too short after trimming
  std::vector<double> x{0.0, 0.0, 0.5, 0.25};
  CHECK_THROWS_AS(rirkit::preprocess(rirkit::make_mono(x, 48000)), Error);
}

TEST_CASE("trim and normalization use the joint peak across channels", "[preprocess]") {
  // right channel is quieter; its level relative to left must survive
  std::vector<double> left(32, 0.0), right(32, 0.0);
  left[2] = 0.8;
  right[2] = 0.4;
  for (std::size_t i = 3; i < 32; ++i) {
    left[i] = 0.1;
    right[i] = 0.05;
  }
  auto [out, rep] = rirkit::preprocess(rirkit::make_stereo(left, right, 48000));
  CHECK(rep.samples_trimmed_leading == 2);
  CHECK(out.samples[0][0] == 1.0);
  CHECK(out.samples[1][0] == 0.5);
}
