// Randomized property suites. Each block runs at least 200 generated cases
// with a fixed seed so failures reproduce.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rirkit/compliance.hpp"
#include "rirkit/decay.hpp"
#include "rirkit/energy.hpp"
#include "rirkit/rng.hpp"
#include "rirkit/spatial.hpp"
#include "test_helpers.hpp"

namespace {

// Random plausible RIR-like signal: decaying noise with random length/rate.
rirkit::ImpulseResponse random_rir(rirkit::Rng& rng) {
  const int rates[] = {16000, 44100, 48000};
  const int fs = rates[static_cast<int>(rng.uniform(0, 3))];
  const double t60 = rng.uniform(0.05, 1.5);
  const double duration = rng.uniform(0.05, 0.8);
  auto h = testutil::noise_decay(rng, t60, fs, duration);
  if (h.size() < 32) h.resize(32, 1e-6);
  return rirkit::make_mono(std::move(h), fs);
}

}  // namespace

TEST_CASE("EDC is monotone, floored, and zero-anchored", "[properties]") {
  rirkit::Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto ir = random_rir(rng);
    const auto edc = rirkit::schroeder_edc(ir);
    REQUIRE(edc.values_db.size() == ir.length());
    REQUIRE(edc.values_db[0] == 0.0);
    for (std::size_t n = 1; n < edc.values_db.size(); ++n) {
      REQUIRE(edc.values_db[n] <= edc.values_db[n - 1]);
      REQUIRE(edc.values_db[n] >= edc.floor_db);
      REQUIRE(edc.values_db[n] <= 0.0);
    }
  }
}

TEST_CASE("decay metrics and energy ratios ignore amplitude scaling", "[properties]") {
  rirkit::Rng rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    const auto ir = random_rir(rng);
    const double scale =
        (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::pow(10.0, rng.uniform(-4.0, 4.0));
    rirkit::ImpulseResponse scaled = ir;
    for (double& v : scaled.samples[0]) v *= scale;

    const auto m1 = rirkit::decay_metrics(rirkit::schroeder_edc(ir));
    const auto m2 = rirkit::decay_metrics(rirkit::schroeder_edc(scaled));
    REQUIRE(m1.t30.available() == m2.t30.available());
    if (m1.t30.available())
      REQUIRE(*m1.t30.seconds == Catch::Approx(*m2.t30.seconds).epsilon(1e-9));
    REQUIRE(m1.edt.available() == m2.edt.available());
    if (m1.edt.available())
      REQUIRE(*m1.edt.seconds == Catch::Approx(*m2.edt.seconds).epsilon(1e-9));

    REQUIRE(rirkit::clarity_c80(ir).c80_db ==
            Catch::Approx(rirkit::clarity_c80(scaled).c80_db).margin(1e-9));
    REQUIRE(rirkit::definition_d50(ir) ==
            Catch::Approx(rirkit::definition_d50(scaled)).margin(1e-12));
    REQUIRE(rirkit::drr(ir).drr_db ==
            Catch::Approx(rirkit::drr(scaled).drr_db).margin(1e-9));
  }
}

TEST_CASE("moving energy from late to early never lowers C80 or D50", "[properties]") {
  rirkit::Rng rng(105);
  const int fs = 48000;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = fs / 2;
    auto h = testutil::noise_decay(rng, rng.uniform(0.1, 0.8), fs, 0.5);
    const auto before_c = rirkit::clarity_c80(rirkit::make_mono(h, fs));
    const double before_d = rirkit::definition_d50(rirkit::make_mono(h, fs));

    // remove a late sample's energy and place it early
    const std::size_t late = static_cast<std::size_t>(rng.uniform(0.1 * n + 4801, n - 1));
    const std::size_t early = static_cast<std::size_t>(rng.uniform(0, 2000));
    const double moved = h[late];
    h[late] = 0.0;
    h[early] = std::sqrt(h[early] * h[early] + moved * moved);

    const auto after_c = rirkit::clarity_c80(rirkit::make_mono(h, fs));
    const double after_d = rirkit::definition_d50(rirkit::make_mono(h, fs));
    REQUIRE(after_c.c80_db >= before_c.c80_db - 1e-9);
    REQUIRE(after_d >= before_d - 1e-12);
  }
}

TEST_CASE("IACC lies in [0,1] and ignores channel swap and scale", "[properties]") {
  rirkit::Rng rng(107);
  for (int trial = 0; trial < 200; ++trial) {
    const int fs = 48000;
    const std::size_t n = 2000 + static_cast<std::size_t>(rng.uniform(0, 4000));
    // random mixture of a shared component and independent noise
    const double mix = rng.uniform(0.0, 1.0);
    const auto shared = testutil::white_noise(rng, n);
    auto left = testutil::white_noise(rng, n);
    auto right = testutil::white_noise(rng, n);
    for (std::size_t i = 0; i < n; ++i) {
      left[i] = mix * shared[i] + (1.0 - mix) * left[i];
      right[i] = mix * shared[i] + (1.0 - mix) * right[i];
    }

    const double v = rirkit::iacc(rirkit::make_stereo(left, right, fs));
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);

    const double swapped = rirkit::iacc(rirkit::make_stereo(right, left, fs));
    REQUIRE(swapped == Catch::Approx(v).margin(1e-12));

    const double scale = std::pow(10.0, rng.uniform(-3.0, 3.0));
    auto left_scaled = left;
    auto right_scaled = right;
    for (double& s : left_scaled) s *= scale;
    for (double& s : right_scaled) s *= scale;
    const double rescaled = rirkit::iacc(rirkit::make_stereo(left_scaled, right_scaled, fs));
    REQUIRE(rescaled == Catch::Approx(v).margin(1e-9));
  }
}

TEST_CASE("STI proxy stays within its affine range", "[properties]") {
  rirkit::Rng rng(109);
  for (int trial = 0; trial < 200; ++trial) {
    const double sti = rirkit::sti_proxy(rng.uniform(0.01, 10.0), rng.uniform(-30.0, 90.0));
    REQUIRE(sti >= 0.15);
    REQUIRE(sti <= 1.0);
  }
}

TEST_CASE("wellness score is monotone in each input", "[properties]") {
  rirkit::Rng rng(111);
  for (int trial = 0; trial < 200; ++trial) {
    rirkit::WellnessInputs in;
    in.rt60_s = rng.uniform(0.1, 3.0);
    in.sti = rng.uniform(0.0, 1.0);
    in.d50 = rng.uniform(0.0, 1.0);
    in.c80_db = rng.uniform(-10.0, 15.0);
    in.volume_m3 = rng.uniform(20.0, 3000.0);
    const double base = rirkit::wellness_score(in);
    REQUIRE(base >= 0.0);
    REQUIRE(base <= 100.0);

    auto bump = in;
    bump.rt60_s += rng.uniform(0.01, 1.0);
    REQUIRE(rirkit::wellness_score(bump) <= base + 1e-9);

    bump = in;
    bump.volume_m3 += rng.uniform(1.0, 2000.0);
    REQUIRE(rirkit::wellness_score(bump) <= base + 1e-9);

    bump = in;
    bump.sti = std::min(1.0, in.sti + rng.uniform(0.0, 0.5));
    REQUIRE(rirkit::wellness_score(bump) >= base - 1e-9);

    bump = in;
    bump.d50 = std::min(1.0, in.d50 + rng.uniform(0.0, 0.5));
    REQUIRE(rirkit::wellness_score(bump) >= base - 1e-9);

    bump = in;
    bump.c80_db += rng.uniform(0.0, 5.0);
    REQUIRE(rirkit::wellness_score(bump) >= base - 1e-9);
  }
}

TEST_CASE("compliance checks are monotone", "[properties]") {
  rirkit::Rng rng(113);
  const auto rules = rirkit::builtin_rules();
  for (int trial = 0; trial < 200; ++trial) {
    const double rt = rng.uniform(0.1, 3.5);
    const double sti = rng.uniform(0.0, 1.0);
    for (const auto& rule : rules) {
      const auto base = rirkit::check({rt, sti}, rule);

      // lowering RT60 toward a max-only rule never flips pass -> fail
      if (!rule.rt60_min_s && rule.rt60_max_s) {
        const double lower_rt = rt * rng.uniform(0.1, 1.0);
        const auto better = rirkit::check({lower_rt, sti}, rule);
        if (base.rt60_pass && *base.rt60_pass) REQUIRE(*better.rt60_pass);
      }

      // raising STI never flips pass -> fail
      if (rule.sti_min) {
        const double higher_sti = std::min(1.0, sti + rng.uniform(0.0, 0.5));
        const auto better = rirkit::check({rt, higher_sti}, rule);
        if (base.sti_pass && *base.sti_pass) REQUIRE(*better.sti_pass);
        if (base.overall == rirkit::ComplianceStatus::pass &&
            better.rt60_pass == base.rt60_pass)
          REQUIRE(better.overall == rirkit::ComplianceStatus::pass);
      }
    }
  }
}
