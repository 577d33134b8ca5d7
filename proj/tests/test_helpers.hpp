#pragma once

// Shared builders for synthetic test signals and scratch directories.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "rirkit/rng.hpp"
#include "rirkit/types.hpp"

namespace testutil {

// Amplitude envelope decaying 60 dB of energy per t60 seconds.
inline std::vector<double> exp_decay(double t60_s, int fs, double duration_s) {
  const std::size_t n = static_cast<std::size_t>(duration_s * fs);
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i)
    h[i] = std::pow(10.0, -3.0 * double(i) / (t60_s * fs));
  return h;
}

inline std::vector<double> noise_decay(rirkit::Rng& rng, double t60_s, int fs,
                                       double duration_s) {
  const std::size_t n = static_cast<std::size_t>(duration_s * fs);
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i)
    h[i] = rng.gaussian() * std::pow(10.0, -3.0 * double(i) / (t60_s * fs));
  return h;
}

inline std::vector<double> sine(double freq_hz, int fs, double duration_s,
                                double amplitude = 1.0) {
  const std::size_t n = static_cast<std::size_t>(duration_s * fs);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * double(i) / fs);
  return x;
}

inline std::vector<double> white_noise(rirkit::Rng& rng, std::size_t n) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.gaussian();
  return x;
}

// Impulse train: (index, amplitude) pairs in a zero buffer.
inline std::vector<double> impulses(std::size_t length,
                                    const std::vector<std::pair<std::size_t, double>>& taps) {
  std::vector<double> x(length, 0.0);
  for (const auto& [idx, amp] : taps) x[idx] += amp;
  return x;
}

inline double rms(const std::vector<double>& x, std::size_t begin, std::size_t end) {
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) acc += x[i] * x[i];
  return std::sqrt(acc / double(end - begin));
}

inline std::string fresh_dir(const std::string& hint) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("rirkit_test_" + hint + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace testutil
