#pragma once

// Schroeder backward integration, decibel energy decay curve, regression
// based EDT/T20/T30, and octave-band decay analysis.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rirkit/filters.hpp"
#include "rirkit/types.hpp"

namespace rirkit {

constexpr double kEdcFloorDb = -140.0;
constexpr std::size_t kMinRegressionSamples = 8;

struct EnergyDecayCurve {
  std::vector<double> values_db;  // values_db[0] == 0, monotone non-increasing
  int sample_rate = 0;
  double floor_db = kEdcFloorDb;
};

inline EnergyDecayCurve schroeder_edc(const ImpulseResponse& rir) {
  check_signal(rir);
  const std::vector<double>& h = rir.mono();

  // Reverse cumulative sum of h^2; summing non-negative terms back to front
  // makes the curve monotone by construction.
  std::vector<double> edc(h.size());
  double acc = 0.0;
  for (std::size_t n = h.size(); n-- > 0;) {
    acc += h[n] * h[n];
    edc[n] = acc;
  }
  const double total = edc[0];
  if (!(total > 0.0))
    throw Error(errc::degenerate_input, "zero-energy signal has no decay curve");

  EnergyDecayCurve out;
  out.sample_rate = rir.sample_rate;
  out.values_db.resize(edc.size());
  out.values_db[0] = 0.0;
  for (std::size_t n = 1; n < edc.size(); ++n) {
    const double db = edc[n] > 0.0 ? 10.0 * std::log10(edc[n] / total) : kEdcFloorDb;
    out.values_db[n] = std::max(db, kEdcFloorDb);
  }
  return out;
}

struct SlopeFit {
  double slope_db_per_s = 0.0;
  double r2 = 0.0;
  std::size_t n_points = 0;
};

// Least-squares line over all EDC samples with upper_db >= value >= lower_db.
inline SlopeFit regression_slope(const EnergyDecayCurve& edc, double upper_db,
                                 double lower_db) {
  if (!(upper_db > lower_db) || upper_db > 0.0)
    throw Error(errc::config_error, "regression range requires 0 >= upper > lower");
  if (edc.values_db.empty() || edc.sample_rate <= 0)
    throw Error(errc::empty_input, "empty decay curve");

  const double deepest = edc.values_db.back();
  if (deepest > lower_db)
    throw InsufficientDecayRange(
        "decay curve reaches only " + std::to_string(deepest) + " dB, range needs " +
            std::to_string(lower_db) + " dB",
        deepest);

  double sum_t = 0.0, sum_y = 0.0;
  std::size_t count = 0;
  const double dt = 1.0 / edc.sample_rate;
  for (std::size_t n = 0; n < edc.values_db.size(); ++n) {
    const double v = edc.values_db[n];
    if (v <= upper_db && v >= lower_db) {
      sum_t += n * dt;
      sum_y += v;
      ++count;
    }
  }
  if (count < kMinRegressionSamples)
    throw InsufficientDecayRange("only " + std::to_string(count) +
                                     " samples in regression range, need " +
                                     std::to_string(kMinRegressionSamples),
                                 deepest);

  const double mean_t = sum_t / count;
  const double mean_y = sum_y / count;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t n = 0; n < edc.values_db.size(); ++n) {
    const double v = edc.values_db[n];
    if (v <= upper_db && v >= lower_db) {
      const double t = n * dt - mean_t;
      const double y = v - mean_y;
      sxx += t * t;
      syy += y * y;
      sxy += t * y;
    }
  }

  SlopeFit fit;
  fit.n_points = count;
  fit.slope_db_per_s = sxy / sxx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;
  return fit;
}

struct DecayEstimate {
  std::optional<double> seconds;
  double r2 = 0.0;     // valid iff seconds is present
  std::string reason;  // set iff seconds is empty
  bool available() const { return seconds.has_value(); }
};

struct DecayMetrics {
  DecayEstimate edt, t20, t30;
};

namespace detail {

inline DecayEstimate estimate_from_range(const EnergyDecayCurve& edc, double upper_db,
                                         double lower_db) {
  DecayEstimate est;
  try {
    const SlopeFit fit = regression_slope(edc, upper_db, lower_db);
    if (fit.slope_db_per_s >= 0.0) {
      est.reason = "non-negative decay slope";
      return est;
    }
    est.seconds = -60.0 / fit.slope_db_per_s;
    est.r2 = fit.r2;
  } catch (const InsufficientDecayRange& e) {
    est.reason = e.what();
  }
  return est;
}

}  // namespace detail

// EDT from (0, -10) dB, T20 from (-5, -25), T30 from (-5, -35); each slope
// is extrapolated to a full 60 dB decay. Partial results are allowed.
inline DecayMetrics decay_metrics(const EnergyDecayCurve& edc) {
  DecayMetrics m;
  m.edt = detail::estimate_from_range(edc, 0.0, -10.0);
  m.t20 = detail::estimate_from_range(edc, -5.0, -25.0);
  m.t30 = detail::estimate_from_range(edc, -5.0, -35.0);
  return m;
}

constexpr std::array<double, 6> kOctaveCenters{125.0, 250.0, 500.0, 1000.0, 2000.0, 4000.0};
constexpr int kOctavePrototypeOrder = 4;

inline double octave_lower_edge(double center_hz) { return center_hz / std::numbers::sqrt2; }
inline double octave_upper_edge(double center_hz) { return center_hz * std::numbers::sqrt2; }

// One causal forward pass through the band filter; zero-phase filtering would
// smear energy backward in time and corrupt EDT.
inline ImpulseResponse octave_filter(const ImpulseResponse& rir, double center_hz) {
  check_signal(rir);
  const std::vector<double>& x = rir.mono();
  const double fs = rir.sample_rate;
  if (!(octave_upper_edge(center_hz) < fs / 2.0))
    throw Error(errc::band_out_of_range,
                "octave band at " + std::to_string(center_hz) + " Hz exceeds Nyquist for fs=" +
                    std::to_string(rir.sample_rate));
  const SosFilter bp = design_butterworth_bandpass(
      kOctavePrototypeOrder, octave_lower_edge(center_hz), octave_upper_edge(center_hz), fs);
  return make_mono(bp.filter(x), rir.sample_rate);
}

struct OctaveBandResult {
  double center_hz = 0.0;
  double lower_hz = 0.0;
  double upper_hz = 0.0;
  DecayMetrics metrics;
};

struct OctaveBandAnalysis {
  std::vector<OctaveBandResult> bands;
  std::vector<std::string> warnings;  // bands omitted (Nyquist) or degenerate
};

inline OctaveBandAnalysis octave_band_analysis(const ImpulseResponse& rir) {
  check_signal(rir);
  OctaveBandAnalysis out;
  for (double center : kOctaveCenters) {
    if (!(octave_upper_edge(center) < rir.sample_rate / 2.0)) {
      out.warnings.push_back(std::to_string(static_cast<int>(center)) +
                             " Hz band omitted: exceeds Nyquist");
      continue;
    }
    OctaveBandResult band;
    band.center_hz = center;
    band.lower_hz = octave_lower_edge(center);
    band.upper_hz = octave_upper_edge(center);
    try {
      band.metrics = decay_metrics(schroeder_edc(octave_filter(rir, center)));
    } catch (const Error& e) {
      out.warnings.push_back(std::to_string(static_cast<int>(center)) +
                             " Hz band failed: " + e.what());
      continue;
    }
    out.bands.push_back(std::move(band));
  }
  return out;
}

}  // namespace rirkit
