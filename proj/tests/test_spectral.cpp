#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rirkit/rng.hpp"
#include "rirkit/spectral.hpp"
#include "test_helpers.hpp"

namespace {
constexpr int kFs = 48000;
}

TEST_CASE("unit impulse has a flat spectrum", "[spectral]") {
  std::vector<double> h(1024, 0.0);
  h[0] = 1.0;
  const auto spec = rirkit::magnitude_spectrum(rirkit::make_mono(h, kFs));
  REQUIRE(spec.freqs_hz.size() == 513);
  REQUIRE(spec.magnitude_db.size() == 513);
  CHECK(spec.freqs_hz.front() == 0.0);
  CHECK(spec.freqs_hz.back() == Catch::Approx(kFs / 2.0));
  for (double v : spec.magnitude_db) CHECK(v == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("bin-centered sine rises at least 40 dB above the median", "[spectral]") {
  // 96 cycles in 4096 samples: exactly bin 96, no leakage
  const std::size_t n = 4096;
  const double freq = 96.0 * kFs / double(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::sin(2.0 * std::numbers::pi * freq * double(i) / kFs);
  const auto spec = rirkit::magnitude_spectrum(rirkit::make_mono(x, kFs));

  std::size_t peak_bin = 0;
  double peak = -1e9;
  for (std::size_t k = 0; k < spec.magnitude_db.size(); ++k)
    if (spec.magnitude_db[k] > peak) {
      peak = spec.magnitude_db[k];
      peak_bin = k;
    }
  CHECK(spec.freqs_hz[peak_bin] == Catch::Approx(freq).margin(1.0));

  std::vector<double> sorted = spec.magnitude_db;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  CHECK(peak - median >= 40.0);
}

TEST_CASE("spectrum magnitudes satisfy Parseval after undoing the dB map", "[spectral]") {
  rirkit::Rng rng(13);
  const auto x = testutil::white_noise(rng, 3000);
  const auto spec = rirkit::magnitude_spectrum(rirkit::make_mono(x, kFs));

  const std::size_t nfft = rirkit::fft::next_pow2(x.size());
  double freq_energy = 0.0;
  for (std::size_t k = 0; k < spec.magnitude_db.size(); ++k) {
    const double mag = std::pow(10.0, spec.magnitude_db[k] / 20.0);
    const bool interior = k != 0 && k != spec.magnitude_db.size() - 1;
    freq_energy += (interior ? 2.0 : 1.0) * mag * mag;
  }
  freq_energy /= double(nfft);

  double time_energy = 0.0;
  for (double v : x) time_energy += v * v;
  CHECK(freq_energy == Catch::Approx(time_energy).epsilon(1e-6));
}

TEST_CASE("sixth-octave smoothing reduces variance, keeps the shape", "[spectral]") {
  rirkit::Rng rng(29);
  const auto x = testutil::white_noise(rng, 16384);
  const auto raw = rirkit::magnitude_spectrum(rirkit::make_mono(x, kFs));
  const auto smooth =
      rirkit::magnitude_spectrum(rirkit::make_mono(x, kFs), rirkit::Smoothing::sixth_octave);
  REQUIRE(raw.magnitude_db.size() == smooth.magnitude_db.size());

  // compare local roughness above 1 kHz where the smoothing span is wide
  double rough_raw = 0.0, rough_smooth = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 1; k < raw.magnitude_db.size(); ++k) {
    if (raw.freqs_hz[k] < 1000.0) continue;
    rough_raw += std::fabs(raw.magnitude_db[k] - raw.magnitude_db[k - 1]);
    rough_smooth += std::fabs(smooth.magnitude_db[k] - smooth.magnitude_db[k - 1]);
    ++count;
  }
  REQUIRE(count > 0);
  CHECK(rough_smooth < 0.2 * rough_raw);
}

TEST_CASE("short input is rejected", "[spectral]") {
  std::vector<double> x(32, 1.0);
  CHECK_THROWS_AS(rirkit::magnitude_spectrum(rirkit::make_mono(x, kFs)), rirkit::Error);
  std::vector<double> y(200, 1.0);
  CHECK_THROWS_AS(rirkit::spectrogram(rirkit::make_mono(y, kFs)), rirkit::Error);
  CHECK_THROWS_AS(rirkit::waterfall(rirkit::make_mono(y, kFs)), rirkit::Error);
}

TEST_CASE("spectrogram of stationary noise is level across frames", "[spectral]") {
  rirkit::Rng rng(41);
  const auto x = testutil::white_noise(rng, kFs);  // 1 s
  const auto grid = rirkit::spectrogram(rirkit::make_mono(x, kFs));
  REQUIRE(grid.times_s.size() == grid.magnitude_db.size());
  REQUIRE(grid.freqs_hz.size() == grid.magnitude_db[0].size());

  std::vector<double> medians;
  for (const auto& row : grid.magnitude_db) {
    std::vector<double> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    medians.push_back(sorted[sorted.size() / 2]);
  }
  const auto [lo, hi] = std::minmax_element(medians.begin(), medians.end());
  CHECK(*hi - *lo < 3.0);
}

TEST_CASE("spectrogram frame energy decays for a decaying signal", "[spectral]") {
  rirkit::Rng rng(43);
  const auto x = testutil::noise_decay(rng, 0.4, kFs, 1.0);
  const auto grid = rirkit::spectrogram(rirkit::make_mono(x, kFs));

  // total frame energy, smoothed over 3 frames, must fall monotonically
  std::vector<double> energy;
  for (const auto& row : grid.magnitude_db) {
    double e = 0.0;
    for (double v : row) e += std::pow(10.0, v / 10.0);
    energy.push_back(e);
  }
  for (std::size_t i = 3; i + 3 < energy.size(); i += 3) {
    const double prev = energy[i - 3] + energy[i - 2] + energy[i - 1];
    const double cur = energy[i] + energy[i + 1] + energy[i + 2];
    REQUIRE(cur < prev);
  }
}

TEST_CASE("digital silence renders at the dB floor", "[spectral]") {
  std::vector<double> x(kFs / 2, 0.0);
  x[0] = 1.0;  // all later frames see zeros only
  const auto grid = rirkit::spectrogram(rirkit::make_mono(x, kFs));
  const auto& last = grid.magnitude_db.back();
  for (double v : last) CHECK(v == -140.0);
}

TEST_CASE("waterfall slice 0 matches the full spectrum", "[spectral]") {
  // Deterministic multitone decay: the comparison is well-posed at the tone
  // peaks, where the fade-in costs only the shared early-energy fraction.
  const std::size_t n = kFs;  // 1 s
  const std::size_t nfft = rirkit::fft::next_pow2(n);
  std::vector<std::size_t> tone_bins;
  for (std::size_t m = 400; m < nfft / 2; m += 1500) tone_bins.push_back(m);

  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double env = std::pow(10.0, -3.0 * double(i) / (0.5 * kFs));
    for (std::size_t m : tone_bins)
      x[i] += env * std::sin(2.0 * std::numbers::pi * double(m) * double(i) / double(nfft));
  }

  const auto ir = rirkit::make_mono(x, kFs);
  const auto grid = rirkit::waterfall(ir, 40);
  const auto spec = rirkit::magnitude_spectrum(ir);
  REQUIRE(grid.freqs_hz.size() == spec.freqs_hz.size());
  REQUIRE(grid.times_s.size() == 40);
  REQUIRE(grid.times_s[0] == 0.0);

  double worst = 0.0;
  for (std::size_t m : tone_bins)
    worst = std::max(worst, std::fabs(grid.magnitude_db[0][m] - spec.magnitude_db[m]));
  CHECK(worst <= 0.5);
}

TEST_CASE("waterfall band level decays monotonically for exponential decay", "[spectral]") {
  rirkit::Rng rng(53);
  const auto x = testutil::noise_decay(rng, 0.4, kFs, 1.0);
  const auto grid = rirkit::waterfall(rirkit::make_mono(x, kFs), 40);

  // mean power over the 800-1250 Hz band per slice
  std::vector<double> band_db;
  for (const auto& row : grid.magnitude_db) {
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < grid.freqs_hz.size(); ++k) {
      if (grid.freqs_hz[k] < 800.0 || grid.freqs_hz[k] > 1250.0) continue;
      acc += std::pow(10.0, row[k] / 10.0);
      ++n;
    }
    band_db.push_back(10.0 * std::log10(acc / double(n)));
  }
  for (std::size_t i = 1; i < band_db.size(); ++i) {
    if (band_db[i] < band_db[0] - 80.0) break;  // below any useful range
    REQUIRE(band_db[i] <= band_db[i - 1] + 1.0);
  }
}

TEST_CASE("damped sinusoid bin decays at the damping rate across slices", "[spectral]") {
  const double f0 = 1000.0;
  const double tau = 0.05;  // seconds
  const std::size_t n = kFs;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = double(i) / kFs;
    x[i] = std::exp(-t / tau) * std::sin(2.0 * std::numbers::pi * f0 * t);
  }
  const std::size_t n_slices = 40;
  const auto grid = rirkit::waterfall(rirkit::make_mono(x, kFs), n_slices);

  std::size_t bin = 0;
  double best = 1e9;
  for (std::size_t k = 0; k < grid.freqs_hz.size(); ++k)
    if (std::fabs(grid.freqs_hz[k] - f0) < best) {
      best = std::fabs(grid.freqs_hz[k] - f0);
      bin = k;
    }

  // |X(f0)| of the remaining tail is proportional to exp(-t_k / tau):
  // expected slope is -20 log10(e) / tau dB per second of offset
  const double slice_dt = grid.times_s[1] - grid.times_s[0];
  const double expected = -20.0 * std::log10(std::exp(1.0)) / tau;
  std::vector<double> levels;
  for (std::size_t s = 0; s < 20; ++s) levels.push_back(grid.magnitude_db[s][bin]);
  double num = 0.0, den = 0.0;
  const double mean_t = 0.5 * (levels.size() - 1);
  double mean_v = 0.0;
  for (double v : levels) mean_v += v;
  mean_v /= double(levels.size());
  for (std::size_t s = 0; s < levels.size(); ++s) {
    num += (double(s) - mean_t) * (levels[s] - mean_v);
    den += (double(s) - mean_t) * (double(s) - mean_t);
  }
  const double slope = num / den / slice_dt;
  CHECK(slope == Catch::Approx(expected).epsilon(0.10));
}

TEST_CASE("amplitude scaling shifts all dB values uniformly", "[spectral]") {
  rirkit::Rng rng(59);
  auto x = testutil::white_noise(rng, 2048);
  const auto a = rirkit::magnitude_spectrum(rirkit::make_mono(x, kFs));
  for (double& v : x) v *= 10.0;  // +20 dB
  const auto b = rirkit::magnitude_spectrum(rirkit::make_mono(x, kFs));
  for (std::size_t k = 0; k < a.magnitude_db.size(); ++k) {
    if (a.magnitude_db[k] <= -100.0) continue;  // floor region
    REQUIRE(b.magnitude_db[k] - a.magnitude_db[k] == Catch::Approx(20.0).margin(1e-9));
  }
}
