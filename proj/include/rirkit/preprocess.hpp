#pragma once

// Preprocessing pipeline: trim leading silence, truncate to 10 s, normalize
// to unit peak. Trimming and normalization use the joint peak across all
// channels so interchannel level differences survive (IACC needs them).

#include <cmath>
#include <cstddef>
#include <utility>

#include "rirkit/types.hpp"

namespace rirkit {

constexpr double kTrimThresholdRatio = 1e-4;
constexpr double kMaxDurationS = 10.0;
constexpr std::size_t kMinAnalyzableSamples = 16;

inline ImpulseResponse to_mono(const ImpulseResponse& ir) {
  check_signal(ir);
  if (ir.channel_count() == 1) return ir;
  const std::size_t len = ir.length();
  std::vector<double> mono(len);
  for (std::size_t n = 0; n < len; ++n)
    mono[n] = 0.5 * (ir.samples[0][n] + ir.samples[1][n]);
  return make_mono(std::move(mono), ir.sample_rate);
}

inline std::pair<ImpulseResponse, PreprocessReport> preprocess(const ImpulseResponse& ir) {
  check_signal(ir);
  PreprocessReport report;
  report.original_sample_rate = ir.sample_rate;

  const double peak = joint_peak(ir);
  if (peak <= 0.0)
    throw Error(errc::degenerate_input, "all-zero signal cannot be preprocessed");

  // Trim strictly before the first sample whose joint magnitude crosses the
  // threshold. Trailing samples are never trimmed.
  const double threshold = kTrimThresholdRatio * peak;
  const std::size_t len = ir.length();
  std::size_t first = 0;
  while (first < len) {
    bool above = false;
    for (const auto& ch : ir.samples)
      if (std::fabs(ch[first]) >= threshold) {
        above = true;
        break;
      }
    if (above) break;
    ++first;
  }
  report.samples_trimmed_leading = first;

  std::size_t out_len = len - first;
  const std::size_t max_samples =
      static_cast<std::size_t>(kMaxDurationS * ir.sample_rate);
  if (out_len > max_samples) {
    out_len = max_samples;
    report.truncated = true;
  }
  if (out_len < kMinAnalyzableSamples)
    throw Error(errc::degenerate_input,
                "signal too short after trimming (" + std::to_string(out_len) +
                    " samples, need " + std::to_string(kMinAnalyzableSamples) + ")");

  ImpulseResponse out;
  out.sample_rate = ir.sample_rate;
  out.samples.reserve(ir.samples.size());
  for (const auto& ch : ir.samples)
    out.samples.emplace_back(ch.begin() + first, ch.begin() + first + out_len);

  // Truncation can remove the global peak, so measure what is left.
  const double out_peak = joint_peak(out);
  if (out_peak <= 0.0)
    throw Error(errc::degenerate_input, "signal is silent within the first 10 s");
  report.peak_before_normalize = out_peak;
  for (auto& ch : out.samples)
    for (double& v : ch) v /= out_peak;

  return {std::move(out), report};
}

}  // namespace rirkit
