#pragma once

// Spatial metrics and analytic room geometry: interaural cross-correlation,
// rectangular-room modal frequencies, Schroeder frequency, and first-order
// image-source reflection paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rirkit/types.hpp"

namespace rirkit {

constexpr double kSpeedOfSound = 343.0;  // m/s
constexpr double kIaccMaxLagS = 0.001;
constexpr double kIaccDefaultLimitS = 0.080;  // early IACC window

// Maximum absolute normalized cross-correlation of the two channels over
// [0, T], lags within +-1 ms on the sample grid. Both indices of the cross
// sum stay inside the window, so Cauchy-Schwarz bounds the result by 1.
inline double iacc(const ImpulseResponse& rir,
                   double integration_limit_s = kIaccDefaultLimitS) {
  check_signal(rir);
  if (rir.channel_count() != 2)
    throw Error(errc::channel_count, "IACC requires a stereo signal");
  const auto& left = rir.samples[0];
  const auto& right = rir.samples[1];

  std::size_t window = rir.length();
  if (integration_limit_s > 0.0)
    window = std::min(window, static_cast<std::size_t>(
                                  std::llround(integration_limit_s * rir.sample_rate)));
  if (window == 0) throw Error(errc::degenerate_input, "empty integration window");

  double energy_l = 0.0, energy_r = 0.0;
  for (std::size_t n = 0; n < window; ++n) {
    energy_l += left[n] * left[n];
    energy_r += right[n] * right[n];
  }
  if (!(energy_l > 0.0) || !(energy_r > 0.0))
    throw Error(errc::degenerate_input, "zero-energy channel inside the IACC window");

  const long max_lag = static_cast<long>(std::floor(kIaccMaxLagS * rir.sample_rate));
  const double norm = std::sqrt(energy_l * energy_r);
  double best = 0.0;
  for (long lag = -max_lag; lag <= max_lag; ++lag) {
    double cross = 0.0;
    const long lo = std::max(0L, -lag);
    const long hi = std::min(static_cast<long>(window), static_cast<long>(window) - lag);
    for (long n = lo; n < hi; ++n) cross += left[n] * right[n + lag];
    best = std::max(best, std::fabs(cross) / norm);
  }
  return best;
}

enum class ModeType { axial, tangential, oblique };

inline const char* to_string(ModeType t) {
  switch (t) {
    case ModeType::axial: return "axial";
    case ModeType::tangential: return "tangential";
    default: return "oblique";
  }
}

struct RoomMode {
  double f_hz = 0.0;
  int nx = 0, ny = 0, nz = 0;
  ModeType type = ModeType::axial;
};

inline double mode_frequency(const RoomGeometry& g, int nx, int ny, int nz) {
  const double fx = nx / g.length, fy = ny / g.width, fz = nz / g.height;
  return kSpeedOfSound / 2.0 * std::sqrt(fx * fx + fy * fy + fz * fz);
}

// Every index triple (not all zero) with f <= f_max, classified by the count
// of nonzero indices and sorted ascending by frequency. Degenerate modes are
// reported individually.
inline std::vector<RoomMode> room_modes(const RoomGeometry& g, double f_max_hz) {
  validate_geometry(g);
  if (!(f_max_hz > 0.0)) throw Error(errc::config_error, "f_max must be positive");

  // Tight per-axis bound: f >= c/2 * n/L for a single nonzero index.
  const auto bound = [&](double axis) {
    return static_cast<int>(std::ceil(2.0 * f_max_hz * axis / kSpeedOfSound));
  };
  const int bx = bound(g.length), by = bound(g.width), bz = bound(g.height);

  std::vector<RoomMode> modes;
  for (int nx = 0; nx <= bx; ++nx) {
    for (int ny = 0; ny <= by; ++ny) {
      for (int nz = 0; nz <= bz; ++nz) {
        if (nx == 0 && ny == 0 && nz == 0) continue;
        const double f = mode_frequency(g, nx, ny, nz);
        if (f > f_max_hz) continue;
        const int nonzero = (nx != 0) + (ny != 0) + (nz != 0);
        RoomMode m;
        m.f_hz = f;
        m.nx = nx;
        m.ny = ny;
        m.nz = nz;
        m.type = nonzero == 1   ? ModeType::axial
                 : nonzero == 2 ? ModeType::tangential
                                : ModeType::oblique;
        modes.push_back(m);
      }
    }
  }
  std::sort(modes.begin(), modes.end(), [](const RoomMode& a, const RoomMode& b) {
    if (a.f_hz != b.f_hz) return a.f_hz < b.f_hz;
    if (a.nx != b.nx) return a.nx < b.nx;
    if (a.ny != b.ny) return a.ny < b.ny;
    return a.nz < b.nz;
  });
  return modes;
}

enum class SchroederFormula {
  standard,       // 2000 * sqrt(RT60 / V)
  legacy_printed  // 4 * RT60 * V^(1/3); dimensionally odd, kept for comparison
};

inline double schroeder_frequency(double rt60_s, double volume_m3,
                                  SchroederFormula formula = SchroederFormula::standard) {
  if (!(rt60_s > 0.0) || !(volume_m3 > 0.0))
    throw Error(errc::config_error, "rt60 and volume must be positive");
  if (formula == SchroederFormula::legacy_printed)
    return 4.0 * rt60_s * std::cbrt(volume_m3);
  return 2000.0 * std::sqrt(rt60_s / volume_m3);
}

enum class Surface { x0, xL, y0, yW, floor, ceiling };

inline const char* to_string(Surface s) {
  switch (s) {
    case Surface::x0: return "x0";
    case Surface::xL: return "xL";
    case Surface::y0: return "y0";
    case Surface::yW: return "yW";
    case Surface::floor: return "floor";
    default: return "ceiling";
  }
}

struct ReflectionPath {
  Vec3 image_source;
  Surface surface = Surface::x0;
  double path_length_m = 0.0;
  double arrival_s = 0.0;
};

struct ReflectionSet {
  double direct_length_m = 0.0;
  double direct_arrival_s = 0.0;
  std::array<ReflectionPath, 6> reflections;
};

// Mirror the source across each of the six walls; path length is the image
// to receiver distance and arrival time uses c = 343 m/s.
inline ReflectionSet first_order_reflections(const RoomGeometry& g) {
  validate_geometry(g);
  const Vec3 s = g.source;
  ReflectionSet out;
  out.direct_length_m = g.source_receiver_distance_m();
  out.direct_arrival_s = out.direct_length_m / kSpeedOfSound;

  const std::array<std::pair<Surface, Vec3>, 6> images{{
      {Surface::x0, {-s.x, s.y, s.z}},
      {Surface::xL, {2.0 * g.length - s.x, s.y, s.z}},
      {Surface::y0, {s.x, -s.y, s.z}},
      {Surface::yW, {s.x, 2.0 * g.width - s.y, s.z}},
      {Surface::floor, {s.x, s.y, -s.z}},
      {Surface::ceiling, {s.x, s.y, 2.0 * g.height - s.z}},
  }};
  for (std::size_t i = 0; i < images.size(); ++i) {
    ReflectionPath p;
    p.surface = images[i].first;
    p.image_source = images[i].second;
    p.path_length_m = distance(p.image_source, g.receiver);
    p.arrival_s = p.path_length_m / kSpeedOfSound;
    out.reflections[i] = p;
  }
  return out;
}

}  // namespace rirkit
