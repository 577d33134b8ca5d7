#pragma once

// FFT-based convolution of dry audio with a room impulse response, peak
// normalized to 95% of full scale. Rate mismatches are resolved by linearly
// resampling the RIR to the dry signal's rate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rirkit/fft.hpp"
#include "rirkit/types.hpp"

namespace rirkit {

constexpr double kAuralizePeak = 0.95;

// Two-tap linear interpolation resampler. Adequate for RIR rate conversion;
// images above the original Nyquist alias at roughly -25 dB worst case, well
// below the reverberant energy this is used on.
inline std::vector<double> resample_linear(const std::vector<double>& x, int from_rate,
                                           int to_rate) {
  if (from_rate <= 0 || to_rate <= 0)
    throw Error(errc::config_error, "sample rates must be positive");
  if (x.empty()) throw Error(errc::empty_input, "cannot resample an empty signal");
  if (from_rate == to_rate) return x;

  const double ratio = double(from_rate) / double(to_rate);
  const std::size_t out_len =
      static_cast<std::size_t>(std::ceil(double(x.size()) * to_rate / from_rate));
  std::vector<double> out(out_len);
  for (std::size_t n = 0; n < out_len; ++n) {
    const double pos = n * ratio;
    const std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 < x.size()) {
      const double frac = pos - double(i);
      out[n] = x[i] * (1.0 - frac) + x[i + 1] * frac;
    } else {
      out[n] = x[std::min(i, x.size() - 1)];
    }
  }
  return out;
}

// Unnormalized full linear convolution, length |x| + |h| - 1.
inline std::vector<double> convolve_raw(const std::vector<double>& x,
                                        const std::vector<double>& h) {
  return fft::convolve_real(x, h);
}

struct AuralizeResult {
  ImpulseResponse out;
  bool rir_resampled = false;
};

inline AuralizeResult convolve(const ImpulseResponse& dry, const ImpulseResponse& rir) {
  check_signal(dry);
  check_signal(rir);
  std::vector<double> h = rir.mono();
  if (!(signal_energy(h) > 0.0))
    throw Error(errc::degenerate_input, "zero-energy impulse response");

  AuralizeResult result;
  if (rir.sample_rate != dry.sample_rate) {
    h = resample_linear(h, rir.sample_rate, dry.sample_rate);
    result.rir_resampled = true;
  }

  result.out.sample_rate = dry.sample_rate;
  double peak = 0.0;
  for (const auto& ch : dry.samples) {
    std::vector<double> y = convolve_raw(ch, h);
    for (double v : y) peak = std::max(peak, std::fabs(v));
    result.out.samples.push_back(std::move(y));
  }
  if (!(peak > 0.0))
    throw Error(errc::degenerate_input, "convolution produced a silent signal");

  // Joint normalization preserves interchannel balance.
  const double gain = kAuralizePeak / peak;
  for (auto& ch : result.out.samples)
    for (double& v : ch) v *= gain;
  return result;
}

}  // namespace rirkit
