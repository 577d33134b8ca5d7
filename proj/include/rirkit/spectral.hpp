#pragma once

// FFT magnitude spectrum with optional fractional-octave smoothing, Hann
// STFT spectrogram, and the cumulative spectral decay ("waterfall") grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "rirkit/fft.hpp"
#include "rirkit/types.hpp"

namespace rirkit {

constexpr double kSpectralFloorDb = -140.0;

struct SpectrumFrame {
  std::vector<double> freqs_hz;      // ascending, [0, fs/2]
  std::vector<double> magnitude_db;  // same length
};

struct TimeFrequencyGrid {
  std::vector<double> times_s;                    // frame or slice positions
  std::vector<double> freqs_hz;                   // bin centers
  std::vector<std::vector<double>> magnitude_db;  // [time][freq]
};

enum class Smoothing { none, sixth_octave };

namespace detail {

inline double to_db_floored(double magnitude) {
  if (!(magnitude > 0.0)) return kSpectralFloorDb;
  return std::max(20.0 * std::log10(magnitude), kSpectralFloorDb);
}

// dB-domain moving average over a +-1/12 octave neighborhood per bin.
inline std::vector<double> smooth_sixth_octave(const std::vector<double>& freqs,
                                               const std::vector<double>& db) {
  const double half_span = std::pow(2.0, 1.0 / 12.0);
  std::vector<double> out(db.size());
  std::size_t lo = 0, hi = 0;
  for (std::size_t k = 0; k < db.size(); ++k) {
    const double f = freqs[k];
    if (f <= 0.0) {
      out[k] = db[k];
      continue;
    }
    while (lo < db.size() && freqs[lo] < f / half_span) ++lo;
    if (hi < lo) hi = lo;
    while (hi < db.size() && freqs[hi] <= f * half_span) ++hi;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += db[i];
    out[k] = hi > lo ? acc / double(hi - lo) : db[k];
  }
  return out;
}

inline std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(i) / double(n - 1));
  return w;
}

}  // namespace detail

// Single FFT of the whole signal, zero-padded to the next power of two.
inline SpectrumFrame magnitude_spectrum(const ImpulseResponse& rir,
                                        Smoothing smoothing = Smoothing::none) {
  check_signal(rir);
  const auto& x = rir.mono();
  if (x.size() < 64)
    throw Error(errc::length_error, "spectrum needs at least 64 samples");

  const std::size_t nfft = fft::next_pow2(x.size());
  const auto bins = fft::real_transform(x, nfft);
  const std::size_t n_out = nfft / 2 + 1;

  SpectrumFrame out;
  out.freqs_hz.resize(n_out);
  out.magnitude_db.resize(n_out);
  const double df = double(rir.sample_rate) / double(nfft);
  for (std::size_t k = 0; k < n_out; ++k) {
    out.freqs_hz[k] = k * df;
    out.magnitude_db[k] = detail::to_db_floored(std::abs(bins[k]));
  }
  if (smoothing == Smoothing::sixth_octave)
    out.magnitude_db = detail::smooth_sixth_octave(out.freqs_hz, out.magnitude_db);
  return out;
}

// Hann-windowed STFT magnitude in dB. Times are frame centers.
inline TimeFrequencyGrid spectrogram(const ImpulseResponse& rir, double window_s = 0.025,
                                     double hop_s = 0.010) {
  check_signal(rir);
  const auto& x = rir.mono();
  const std::size_t win = static_cast<std::size_t>(std::llround(window_s * rir.sample_rate));
  const std::size_t hop = static_cast<std::size_t>(std::llround(hop_s * rir.sample_rate));
  if (win < 2 || hop < 1)
    throw Error(errc::config_error, "window and hop must span at least one sample");
  if (x.size() < win)
    throw Error(errc::length_error, "signal shorter than one analysis window");

  const std::vector<double> w = detail::hann_window(win);
  const std::size_t nfft = fft::next_pow2(win);
  const std::size_t n_bins = nfft / 2 + 1;
  const double df = double(rir.sample_rate) / double(nfft);

  TimeFrequencyGrid grid;
  grid.freqs_hz.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) grid.freqs_hz[k] = k * df;

  std::vector<double> frame(win);
  for (std::size_t start = 0; start + win <= x.size(); start += hop) {
    for (std::size_t i = 0; i < win; ++i) frame[i] = x[start + i] * w[i];
    const auto bins = fft::real_transform(frame, nfft);
    std::vector<double> row(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k)
      row[k] = detail::to_db_floored(std::abs(bins[k]));
    grid.times_s.push_back((start + win / 2.0) / rir.sample_rate);
    grid.magnitude_db.push_back(std::move(row));
  }
  return grid;
}

constexpr std::size_t kWaterfallFadeSamples = 128;

// Cumulative spectral decay: slice k is the spectrum of the signal from
// offset k*(N/n_slices) to the end, with a short half-Hann fade-in softening
// the cut. All slices share one FFT size so rows share the frequency axis.
inline TimeFrequencyGrid waterfall(const ImpulseResponse& rir, std::size_t n_slices = 40) {
  check_signal(rir);
  const auto& x = rir.mono();
  if (x.size() < 256)
    throw Error(errc::length_error, "waterfall needs at least 256 samples");
  if (n_slices < 2) throw Error(errc::config_error, "waterfall needs at least 2 slices");

  const std::size_t nfft = fft::next_pow2(x.size());
  const std::size_t n_bins = nfft / 2 + 1;
  const double df = double(rir.sample_rate) / double(nfft);

  TimeFrequencyGrid grid;
  grid.freqs_hz.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) grid.freqs_hz[k] = k * df;

  for (std::size_t s = 0; s < n_slices; ++s) {
    const std::size_t offset = s * x.size() / n_slices;
    std::vector<double> slice(x.begin() + offset, x.end());
    const std::size_t fade = std::min(kWaterfallFadeSamples, slice.size());
    for (std::size_t i = 0; i < fade; ++i) {
      const double w =
          0.5 - 0.5 * std::cos(std::numbers::pi * double(i) / double(fade));
      slice[i] *= w;
    }
    const auto bins = fft::real_transform(slice, nfft);
    std::vector<double> row(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k)
      row[k] = detail::to_db_floored(std::abs(bins[k]));
    grid.times_s.push_back(double(offset) / rir.sample_rate);
    grid.magnitude_db.push_back(std::move(row));
  }
  return grid;
}

}  // namespace rirkit
