#pragma once

// Image-source RIR synthesis for rectangular rooms, batch dataset generation
// with reproducible sampling, and the physical-plausibility validation
// battery (decay linearity, Sabine correlation, reflection timing, modal
// peaks).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rirkit/decay.hpp"
#include "rirkit/energy.hpp"
#include "rirkit/preprocess.hpp"
#include "rirkit/rng.hpp"
#include "rirkit/spatial.hpp"
#include "rirkit/spectral.hpp"
#include "rirkit/types.hpp"

namespace rirkit {

constexpr double kMinWallClearanceM = 0.5;
constexpr double kMinSourceReceiverM = 1.0;
constexpr int kMaxIsmOrder = 20;

enum class TailMode { none, exponential_noise };

struct SimulationConfig {
  RoomGeometry geom;
  // Broadband absorption per surface, indexed by Surface (x0, xL, y0, yW,
  // floor, ceiling).
  std::array<double, 6> absorption{0.3, 0.3, 0.3, 0.3, 0.3, 0.3};
  int max_order = 6;
  int sample_rate = 48000;
  TailMode tail = TailMode::exponential_noise;
  std::uint64_t seed = 0;
};

inline void validate_config(const SimulationConfig& c) {
  validate_geometry(c.geom);
  for (double a : c.absorption)
    if (!(a > 0.0 && a < 1.0))
      throw Error(errc::config_error, "absorption coefficients must lie in (0, 1)");
  if (c.max_order < 0 || c.max_order > kMaxIsmOrder)
    throw Error(errc::config_error,
                "max_order must lie in [0, " + std::to_string(kMaxIsmOrder) + "]");
  if (c.sample_rate <= 0) throw Error(errc::config_error, "sample rate must be positive");
  const auto clear = [&](const Vec3& p) {
    return p.x >= kMinWallClearanceM && p.x <= c.geom.length - kMinWallClearanceM &&
           p.y >= kMinWallClearanceM && p.y <= c.geom.width - kMinWallClearanceM &&
           p.z >= kMinWallClearanceM && p.z <= c.geom.height - kMinWallClearanceM;
  };
  if (!clear(c.geom.source) || !clear(c.geom.receiver))
    throw Error(errc::config_error, "source and receiver need 0.5 m wall clearance");
  if (c.geom.source_receiver_distance_m() < kMinSourceReceiverM)
    throw Error(errc::config_error, "source and receiver must be at least 1 m apart");
}

// Surface areas in absorption-array order.
inline std::array<double, 6> surface_areas(const RoomGeometry& g) {
  const double a_x = g.width * g.height;   // x0, xL
  const double a_y = g.length * g.height;  // y0, yW
  const double a_z = g.length * g.width;   // floor, ceiling
  return {a_x, a_x, a_y, a_y, a_z, a_z};
}

inline double mean_absorption(const RoomGeometry& g, const std::array<double, 6>& alpha) {
  const auto areas = surface_areas(g);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    num += areas[i] * alpha[i];
    den += areas[i];
  }
  return num / den;
}

inline double sabine_rt60(const RoomGeometry& g, const std::array<double, 6>& alpha) {
  return 0.161 * g.volume_m3() / (g.surface_area_m2() * mean_absorption(g, alpha));
}

inline double eyring_rt60(const RoomGeometry& g, const std::array<double, 6>& alpha) {
  const double a_bar = mean_absorption(g, alpha);
  return 0.161 * g.volume_m3() / (-g.surface_area_m2() * std::log(1.0 - a_bar));
}

// One deterministic image-source arrival. Image indices follow the single
// index per axis convention: even i mirrors to s + i*L, odd i to -s + (i+1)*L,
// and |i| is the bounce count contributed by that axis.
struct Arrival {
  int ix = 0, iy = 0, iz = 0;
  double delay_s = 0.0;
  double amplitude = 0.0;  // product of reflection coefficients over distance
};

namespace detail {

struct AxisSpec {
  double source = 0.0, receiver = 0.0, size = 0.0;
  double beta_neg = 0.0, beta_pos = 0.0;  // reflection coeff at 0-wall / far wall
};

inline double axis_image_coordinate(const AxisSpec& ax, int i) {
  return (i % 2 == 0) ? ax.source + i * ax.size : -ax.source + (i + 1) * ax.size;
}

// Reflection coefficient product for |i| bounces split between the two walls.
// Odd positive indices end on the far wall, odd negative on the near wall.
inline double axis_reflection_product(const AxisSpec& ax, int i) {
  const int n = std::abs(i);
  int n_neg, n_pos;
  if (i % 2 == 0) {
    n_neg = n / 2;
    n_pos = n / 2;
  } else if (i > 0) {
    n_pos = (n + 1) / 2;
    n_neg = (n - 1) / 2;
  } else {
    n_neg = (n + 1) / 2;
    n_pos = (n - 1) / 2;
  }
  return std::pow(ax.beta_neg, n_neg) * std::pow(ax.beta_pos, n_pos);
}

}  // namespace detail

// All deterministic arrivals with |ix| + |iy| + |iz| <= max_order.
inline std::vector<Arrival> ism_arrivals(const SimulationConfig& c) {
  validate_config(c);
  const auto beta = [&](Surface s) {
    return std::sqrt(1.0 - c.absorption[static_cast<std::size_t>(s)]);
  };
  const std::array<detail::AxisSpec, 3> axes{{
      {c.geom.source.x, c.geom.receiver.x, c.geom.length, beta(Surface::x0), beta(Surface::xL)},
      {c.geom.source.y, c.geom.receiver.y, c.geom.width, beta(Surface::y0), beta(Surface::yW)},
      {c.geom.source.z, c.geom.receiver.z, c.geom.height, beta(Surface::floor),
       beta(Surface::ceiling)},
  }};

  std::vector<Arrival> arrivals;
  const int r = c.max_order;
  for (int ix = -r; ix <= r; ++ix) {
    for (int iy = -(r - std::abs(ix)); iy <= r - std::abs(ix); ++iy) {
      const int rem = r - std::abs(ix) - std::abs(iy);
      for (int iz = -rem; iz <= rem; ++iz) {
        const double dx = detail::axis_image_coordinate(axes[0], ix) - axes[0].receiver;
        const double dy = detail::axis_image_coordinate(axes[1], iy) - axes[1].receiver;
        const double dz = detail::axis_image_coordinate(axes[2], iz) - axes[2].receiver;
        const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
        Arrival a;
        a.ix = ix;
        a.iy = iy;
        a.iz = iz;
        a.delay_s = dist / kSpeedOfSound;
        a.amplitude = detail::axis_reflection_product(axes[0], ix) *
                      detail::axis_reflection_product(axes[1], iy) *
                      detail::axis_reflection_product(axes[2], iz) / dist;
        arrivals.push_back(a);
      }
    }
  }
  // Index tie-break keeps coincident arrivals in a reproducible order.
  std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) {
    return std::tie(a.delay_s, a.ix, a.iy, a.iz) < std::tie(b.delay_s, b.ix, b.iy, b.iz);
  });
  return arrivals;
}

constexpr double kTailLengthFactor = 1.5;  // tail spans 90 dB of decay
constexpr double kMaxSimulatedS = 10.0;

inline ImpulseResponse simulate_ism(const SimulationConfig& c) {
  std::vector<Arrival> arrivals = ism_arrivals(c);
  const double fs = c.sample_rate;

  // The image set is only complete out to roughly max_order shells along the
  // shortest axis; beyond that horizon arrivals thin out unphysically. With
  // a noise tail the deterministic part stops at the completeness horizon
  // (never dropping direct or first-order paths) and the tail carries the
  // decay from there.
  double splice_s = arrivals.back().delay_s;
  if (c.tail == TailMode::exponential_noise && c.max_order > 1) {
    const double min_dim = std::min({c.geom.length, c.geom.width, c.geom.height});
    double first_order_max = 0.0;
    for (const Arrival& a : arrivals)
      if (std::abs(a.ix) + std::abs(a.iy) + std::abs(a.iz) <= 1)
        first_order_max = std::max(first_order_max, a.delay_s);
    const double horizon = c.max_order * min_dim / kSpeedOfSound;
    splice_s = std::min(splice_s, std::max(horizon, first_order_max));
  }

  // +2 leaves room for the second interpolation tap.
  const std::size_t n_ism = static_cast<std::size_t>(std::ceil(splice_s * fs)) + 2;
  std::size_t n_total = n_ism;

  double tail_rt60 = 0.0;
  if (c.tail == TailMode::exponential_noise) {
    // Eyring prediction matches the sqrt(1-alpha) per-bounce energy loss the
    // image amplitudes already encode.
    tail_rt60 = eyring_rt60(c.geom, c.absorption);
    const std::size_t n_tail =
        static_cast<std::size_t>(std::ceil(kTailLengthFactor * tail_rt60 * fs));
    n_total = std::min(n_ism + n_tail,
                       static_cast<std::size_t>(std::ceil(kMaxSimulatedS * fs)));
    n_total = std::max(n_total, n_ism);
  }

  std::vector<double> h(n_total, 0.0);
  for (const Arrival& a : arrivals) {
    if (a.delay_s > splice_s) continue;
    const double pos = a.delay_s * fs;
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - double(i);
    if (i + 1 < h.size()) {
      h[i] += a.amplitude * (1.0 - frac);
      h[i + 1] += a.amplitude * frac;
    }
  }

  if (c.tail == TailMode::exponential_noise && n_total > n_ism) {
    // Level-match the noise to the mean-square envelope of the last 10 ms of
    // the deterministic part.
    const std::size_t window =
        std::min(n_ism, std::max<std::size_t>(32, static_cast<std::size_t>(0.010 * fs)));
    double ms = 0.0;
    for (std::size_t n = n_ism - window; n < n_ism; ++n) ms += h[n] * h[n];
    ms /= double(window);
    const double sigma = std::sqrt(ms);

    Rng rng(c.seed);
    const double decay_per_sample = std::pow(10.0, -3.0 / (tail_rt60 * fs));
    double envelope = sigma;
    for (std::size_t n = n_ism; n < n_total; ++n) {
      h[n] += envelope * rng.gaussian();
      envelope *= decay_per_sample;
    }
  }

  return make_mono(std::move(h), c.sample_rate);
}

// Metrics stored alongside each dataset record, computed with the same
// analysis pipeline a consumer would run.
struct PrecomputedMetrics {
  std::optional<double> rt60_s;  // T30, falling back to T20
  double drr_db = 0.0;
  double c80_db = 0.0;
  double d50 = 0.0;
};

struct RirRecord {
  ImpulseResponse rir;  // raw simulator output
  SimulationConfig config;
  PrecomputedMetrics metrics;
};

inline PrecomputedMetrics compute_record_metrics(const ImpulseResponse& rir) {
  const auto [prepped, report] = preprocess(rir);
  const ImpulseResponse mono = to_mono(prepped);
  PrecomputedMetrics m;
  const DecayMetrics dm = decay_metrics(schroeder_edc(mono));
  if (dm.t30.available())
    m.rt60_s = dm.t30.seconds;
  else if (dm.t20.available())
    m.rt60_s = dm.t20.seconds;
  m.drr_db = drr(mono).drr_db;
  m.c80_db = clarity_c80(mono).c80_db;
  m.d50 = definition_d50(mono);
  return m;
}

// Sampling ranges for batch generation; defaults follow common architectural
// spaces.
struct DatasetParams {
  int count = 1;
  std::uint64_t seed = 0;
  double length_min = 3.0, length_max = 25.0;
  double width_min = 3.0, width_max = 20.0;
  double height_min = 2.4, height_max = 8.0;
  double absorption_min = 0.15, absorption_max = 0.54;
  int max_order = 6;
  int sample_rate = 48000;
  TailMode tail = TailMode::exponential_noise;
};

constexpr int kPlacementAttempts = 1000;

inline SimulationConfig sample_config(const DatasetParams& p, Rng& rng,
                                      std::uint64_t record_seed) {
  SimulationConfig c;
  c.geom.length = rng.uniform(p.length_min, p.length_max);
  c.geom.width = rng.uniform(p.width_min, p.width_max);
  c.geom.height = rng.uniform(p.height_min, p.height_max);
  for (double& a : c.absorption) a = rng.uniform(p.absorption_min, p.absorption_max);

  bool placed = false;
  for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
    const auto draw = [&](double size) {
      return rng.uniform(kMinWallClearanceM, size - kMinWallClearanceM);
    };
    c.geom.source = {draw(c.geom.length), draw(c.geom.width), draw(c.geom.height)};
    c.geom.receiver = {draw(c.geom.length), draw(c.geom.width), draw(c.geom.height)};
    if (c.geom.source_receiver_distance_m() >= kMinSourceReceiverM) {
      placed = true;
      break;
    }
  }
  if (!placed)
    throw Error(errc::placement_error,
                "could not place source and receiver after " +
                    std::to_string(kPlacementAttempts) + " attempts");

  c.max_order = p.max_order;
  c.sample_rate = p.sample_rate;
  c.tail = p.tail;
  c.seed = record_seed;
  return c;
}

inline std::vector<RirRecord> generate_dataset(const DatasetParams& p) {
  if (p.count < 1) throw Error(errc::config_error, "dataset needs at least one record");
  std::vector<RirRecord> records;
  records.reserve(static_cast<std::size_t>(p.count));
  for (int i = 0; i < p.count; ++i) {
    // Each record draws from its own stream so results do not depend on how
    // many samples earlier records consumed.
    Rng rng(derive_seed(p.seed, static_cast<std::uint64_t>(i) * 2));
    RirRecord rec;
    rec.config = sample_config(p, rng, derive_seed(p.seed, static_cast<std::uint64_t>(i) * 2 + 1));
    rec.rir = simulate_ism(rec.config);
    rec.metrics = compute_record_metrics(rec.rir);
    records.push_back(std::move(rec));
  }
  return records;
}

// Section 4.3-style validation battery over a simulated batch.
struct ModePeakCheck {
  double predicted_hz = 0.0;
  double peak_hz = 0.0;
  double error_hz = 0.0;
};

struct RecordValidation {
  std::optional<double> edc_r2;  // linearity of the (-5, -35) dB fit
  std::optional<double> t30_s;
  double sabine_t60_s = 0.0;
  double first_reflection_error_samples = 0.0;
};

struct ValidationReport {
  std::vector<RecordValidation> records;
  double median_edc_r2 = 0.0;
  double t30_sabine_correlation = 0.0;
  std::size_t t30_count = 0;
  double max_first_reflection_error_samples = 0.0;
  std::vector<ModePeakCheck> mode_checks;  // for the designated (first) record
  double mode_mean_error_hz = 0.0;
};

namespace detail {

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

// Max |timing difference| in samples between order<=1 image arrivals and the
// analytic first-order reflection paths (plus the direct path).
inline double first_reflection_timing_error(const SimulationConfig& config) {
  SimulationConfig c1 = config;
  c1.max_order = 1;
  std::vector<double> ism_times;
  for (const Arrival& a : ism_arrivals(c1)) ism_times.push_back(a.delay_s);

  const ReflectionSet set = first_order_reflections(config.geom);
  std::vector<double> geo_times{set.direct_arrival_s};
  for (const ReflectionPath& p : set.reflections) geo_times.push_back(p.arrival_s);

  std::sort(ism_times.begin(), ism_times.end());
  std::sort(geo_times.begin(), geo_times.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(ism_times.size(), geo_times.size()); ++i)
    worst = std::max(worst, std::fabs(ism_times[i] - geo_times[i]) * config.sample_rate);
  return worst;
}

}  // namespace detail

// Compare the lowest distinct predicted modal frequencies against local
// maxima of the record's magnitude spectrum.
inline std::vector<ModePeakCheck> mode_peak_check(const RirRecord& rec, double f_max_hz = 120.0,
                                                  std::size_t max_modes = 5) {
  const auto [prepped, rep] = preprocess(rec.rir);
  const SpectrumFrame spec = magnitude_spectrum(to_mono(prepped));
  const std::vector<RoomMode> modes = room_modes(rec.config.geom, f_max_hz);

  std::vector<double> predicted;
  for (const RoomMode& m : modes) {
    if (!predicted.empty() && m.f_hz - predicted.back() < 0.5) continue;  // degenerate cluster
    predicted.push_back(m.f_hz);
    if (predicted.size() >= max_modes) break;
  }

  std::vector<ModePeakCheck> checks;
  for (double f : predicted) {
    const double search = std::max(3.0, 0.15 * f);
    double best_f = f - search, best_mag = -1e300;
    bool found = false;
    for (std::size_t k = 1; k + 1 < spec.freqs_hz.size(); ++k) {
      if (spec.freqs_hz[k] < f - search || spec.freqs_hz[k] > f + search) continue;
      if (spec.magnitude_db[k] >= spec.magnitude_db[k - 1] &&
          spec.magnitude_db[k] >= spec.magnitude_db[k + 1] &&
          spec.magnitude_db[k] > best_mag) {
        best_mag = spec.magnitude_db[k];
        best_f = spec.freqs_hz[k];
        found = true;
      }
    }
    ModePeakCheck check;
    check.predicted_hz = f;
    check.peak_hz = found ? best_f : 0.0;
    check.error_hz = found ? std::fabs(best_f - f) : search;
    checks.push_back(check);
  }
  return checks;
}

inline ValidationReport validate_batch(const std::vector<RirRecord>& records) {
  if (records.empty()) throw Error(errc::empty_input, "validation needs a nonempty batch");
  ValidationReport report;
  std::vector<double> r2s, t30s, sabines;

  for (const RirRecord& rec : records) {
    RecordValidation rv;
    rv.sabine_t60_s = sabine_rt60(rec.config.geom, rec.config.absorption);
    rv.first_reflection_error_samples = detail::first_reflection_timing_error(rec.config);
    report.max_first_reflection_error_samples = std::max(
        report.max_first_reflection_error_samples, rv.first_reflection_error_samples);
    try {
      const auto [prepped, rep] = preprocess(rec.rir);
      const EnergyDecayCurve edc = schroeder_edc(to_mono(prepped));
      const SlopeFit fit = regression_slope(edc, -5.0, -35.0);
      rv.edc_r2 = fit.r2;
      r2s.push_back(fit.r2);
      if (fit.slope_db_per_s < 0.0) {
        rv.t30_s = -60.0 / fit.slope_db_per_s;
        t30s.push_back(*rv.t30_s);
        sabines.push_back(rv.sabine_t60_s);
      }
    } catch (const Error&) {
      // record stays without r2/t30
    }
    report.records.push_back(rv);
  }

  if (!r2s.empty()) {
    std::sort(r2s.begin(), r2s.end());
    report.median_edc_r2 = r2s[r2s.size() / 2];
  }
  report.t30_count = t30s.size();
  report.t30_sabine_correlation = detail::pearson(t30s, sabines);
  report.mode_checks = mode_peak_check(records.front());
  if (!report.mode_checks.empty()) {
    double acc = 0.0;
    for (const auto& c : report.mode_checks) acc += c.error_hz;
    report.mode_mean_error_hz = acc / double(report.mode_checks.size());
  }
  return report;
}

}  // namespace rirkit
