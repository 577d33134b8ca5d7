#pragma once

// Early/late energy ratios (C80, D50, DRR), an SNR estimator, the RT60/SNR
// based speech intelligibility proxy, and the composite wellness score.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>

#include "rirkit/types.hpp"

namespace rirkit {

constexpr double kSaturationDb = 100.0;
constexpr double kSaturationEnergyRatio = 1e-12;
constexpr double kDirectWindowHalfS = 0.0025;  // +-2.5 ms around the peak

namespace detail {

inline double energy_between(const std::vector<double>& h, std::size_t begin,
                             std::size_t end) {
  double e = 0.0;
  for (std::size_t n = begin; n < std::min(end, h.size()); ++n) e += h[n] * h[n];
  return e;
}

// Saturating early/late ratio in dB shared by C80 and DRR.
inline std::pair<double, bool> saturating_ratio_db(double early, double late) {
  const double total = early + late;
  if (late < kSaturationEnergyRatio * total) return {kSaturationDb, true};
  if (early < kSaturationEnergyRatio * total) return {-kSaturationDb, true};
  const double db = 10.0 * std::log10(early / late);
  if (db > kSaturationDb) return {kSaturationDb, true};
  if (db < -kSaturationDb) return {-kSaturationDb, true};
  return {db, false};
}

inline std::size_t peak_index(const std::vector<double>& h) {
  std::size_t idx = 0;
  double best = -1.0;
  for (std::size_t n = 0; n < h.size(); ++n) {
    const double a = std::fabs(h[n]);
    if (a > best) {
      best = a;
      idx = n;
    }
  }
  return idx;
}

}  // namespace detail

struct C80Result {
  double c80_db = 0.0;
  bool saturated = false;
};

// Energy up to and including floor(0.080*fs) versus everything after. The
// late part is summed directly; subtracting from the total would cancel
// catastrophically when the tail is tiny.
inline C80Result clarity_c80(const ImpulseResponse& rir) {
  check_signal(rir);
  const auto& h = rir.mono();
  const std::size_t n80 = static_cast<std::size_t>(std::floor(0.080 * rir.sample_rate));
  const double early = detail::energy_between(h, 0, n80 + 1);
  const double late = detail::energy_between(h, n80 + 1, h.size());
  if (!(early + late > 0.0)) throw Error(errc::degenerate_input, "zero-energy signal");
  const auto [db, sat] = detail::saturating_ratio_db(early, late);
  return {db, sat};
}

// Fraction of total energy arriving up to and including floor(0.050*fs).
inline double definition_d50(const ImpulseResponse& rir) {
  check_signal(rir);
  const auto& h = rir.mono();
  const double total = signal_energy(h);
  if (!(total > 0.0)) throw Error(errc::degenerate_input, "zero-energy signal");
  const std::size_t n50 = static_cast<std::size_t>(std::floor(0.050 * rir.sample_rate));
  const double early = detail::energy_between(h, 0, n50 + 1);
  return std::clamp(early / total, 0.0, 1.0);
}

struct DrrResult {
  double drr_db = 0.0;
  bool saturated = false;
};

// Direct window is the peak sample +-2.5 ms, truncated to signal bounds.
inline DrrResult drr(const ImpulseResponse& rir) {
  check_signal(rir);
  const auto& h = rir.mono();
  const std::size_t peak = detail::peak_index(h);
  const std::size_t half =
      static_cast<std::size_t>(std::floor(kDirectWindowHalfS * rir.sample_rate));
  const std::size_t begin = peak > half ? peak - half : 0;
  const std::size_t end = std::min(peak + half + 1, h.size());
  const double direct = detail::energy_between(h, begin, end);
  const double rest =
      detail::energy_between(h, 0, begin) + detail::energy_between(h, end, h.size());
  if (!(direct + rest > 0.0)) throw Error(errc::degenerate_input, "zero-energy signal");
  const auto [db, sat] = detail::saturating_ratio_db(direct, rest);
  return {db, sat};
}

constexpr double kDefaultSnrDb = 15.0;  // Eq. centering: gives the neutral R_S = 0.5

struct SnrEstimate {
  double snr_db = kDefaultSnrDb;
  bool fallback = false;  // true when the signal was too short to estimate
};

// Signal level: mean square of the direct window around the peak. Noise
// level: mean square of the final 10% of the signal. Clamped to [0, 60] dB.
inline SnrEstimate estimate_snr(const ImpulseResponse& rir) {
  check_signal(rir);
  const auto& h = rir.mono();
  if (rir.duration_s() < 0.2) return {kDefaultSnrDb, true};

  const std::size_t peak = detail::peak_index(h);
  const std::size_t half =
      static_cast<std::size_t>(std::floor(kDirectWindowHalfS * rir.sample_rate));
  const std::size_t begin = peak > half ? peak - half : 0;
  const std::size_t end = std::min(peak + half + 1, h.size());
  const double signal_ms = detail::energy_between(h, begin, end) / double(end - begin);

  const std::size_t tail_start = h.size() - std::max<std::size_t>(h.size() / 10, 1);
  const double noise_ms =
      detail::energy_between(h, tail_start, h.size()) / double(h.size() - tail_start);

  if (!(noise_ms > 0.0)) return {60.0, false};
  const double snr = 10.0 * std::log10(signal_ms / noise_ms);
  return {std::clamp(snr, 0.0, 60.0), false};
}

enum class SnrSource { estimated, user_supplied };

struct StiInputs {
  double rt60_s = 0.0;
  double snr_db = kDefaultSnrDb;
  SnrSource snr_source = SnrSource::estimated;
};

// Reverberation/noise proxy for speech intelligibility, range [0.15, 1.0].
// Not a substitute for the full IEC 60268-16 procedure.
inline double sti_proxy(const StiInputs& in) {
  if (!(in.rt60_s > 0.0)) throw Error(errc::config_error, "rt60 must be positive");
  const double r_t = 1.0 / (1.0 + std::pow(in.rt60_s / 0.8, 1.6));
  const double r_s = 1.0 / (1.0 + std::pow(10.0, -(in.snr_db - 15.0) / 10.0));
  return 0.15 + 0.85 * (0.65 * r_t + 0.35 * r_s);
}

inline double sti_proxy(double rt60_s, double snr_db) {
  return sti_proxy(StiInputs{rt60_s, snr_db, SnrSource::user_supplied});
}

struct WellnessInputs {
  double rt60_s = 0.0;
  double sti = 0.0;
  double d50 = 0.0;
  double c80_db = 0.0;
  double volume_m3 = 0.0;
};

// Larger rooms are harder to control acoustically; 300 m^3 and below is
// neutral, the penalty saturates on an 800 m^3 scale.
inline double volume_adjustment(double volume_m3) {
  return 1.0 / (1.0 + std::max(0.0, volume_m3 - 300.0) / 800.0);
}

// Composite 0-100 decision-support score: 45% reverberation penalty, 25%
// intelligibility, 20% definition, 10% clarity, times the volume adjustment.
inline double wellness_score(const WellnessInputs& in) {
  if (!(in.volume_m3 > 0.0)) throw Error(errc::config_error, "volume must be positive");
  if (!(in.rt60_s > 0.0)) throw Error(errc::config_error, "rt60 must be positive");
  const double f_r = 1.0 / (1.0 + std::pow(in.rt60_s / 0.9, 1.8));
  const double f_s = std::clamp(in.sti, 0.0, 1.0);
  const double f_d = std::clamp(in.d50, 0.0, 1.0);
  const double f_c = std::clamp((in.c80_db + 2.0) / 10.0, 0.0, 1.0);
  return 100.0 * volume_adjustment(in.volume_m3) *
         (0.45 * f_r + 0.25 * f_s + 0.20 * f_d + 0.10 * f_c);
}

}  // namespace rirkit
