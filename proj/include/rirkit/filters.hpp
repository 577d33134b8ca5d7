#pragma once

// Butterworth bandpass design as a cascade of second-order sections. Poles
// are taken from the analog lowpass prototype, mapped through the lowpass->
// bandpass transform, then discretized by the bilinear transform with
// frequency prewarping. SOS form keeps the 125 Hz band stable at 48 kHz,
// where a direct-form transfer function would be ill-conditioned.

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "rirkit/types.hpp"

namespace rirkit {

struct Biquad {
  double b0 = 0, b1 = 0, b2 = 0;  // numerator
  double a1 = 0, a2 = 0;          // denominator, a0 normalized to 1
};

struct SosFilter {
  std::vector<Biquad> sections;

  // Causal single-pass filtering (transposed direct form II per section).
  std::vector<double> filter(const std::vector<double>& x) const {
    std::vector<double> y = x;
    for (const auto& s : sections) {
      double z1 = 0.0, z2 = 0.0;
      for (double& v : y) {
        const double in = v;
        const double out = s.b0 * in + z1;
        z1 = s.b1 * in - s.a1 * out + z2;
        z2 = s.b2 * in - s.a2 * out;
        v = out;
      }
    }
    return y;
  }

  // Frequency response magnitude at f_hz for sample rate fs.
  double magnitude_at(double f_hz, double fs) const {
    const std::complex<double> z =
        std::polar(1.0, 2.0 * std::numbers::pi * f_hz / fs);
    const std::complex<double> zi = 1.0 / z;
    std::complex<double> h(1.0, 0.0);
    for (const auto& s : sections) {
      h *= (s.b0 + s.b1 * zi + s.b2 * zi * zi) /
           (1.0 + s.a1 * zi + s.a2 * zi * zi);
    }
    return std::abs(h);
  }
};

// Bandpass Butterworth with an order-N lowpass prototype (2N poles total).
inline SosFilter design_butterworth_bandpass(int prototype_order, double lower_hz,
                                             double upper_hz, double fs) {
  if (prototype_order < 1 || prototype_order % 2 != 0)
    throw Error(errc::config_error, "prototype order must be a positive even number");
  if (!(lower_hz > 0.0) || !(upper_hz > lower_hz) || !(upper_hz < fs / 2.0))
    throw Error(errc::band_out_of_range,
                "band edges must satisfy 0 < lower < upper < fs/2");

  const int n = prototype_order;
  const double k2 = 2.0 * fs;  // bilinear constant, s = k2*(z-1)/(z+1)

  // Prewarped analog band edges.
  const double wl = k2 * std::tan(std::numbers::pi * lower_hz / fs);
  const double wu = k2 * std::tan(std::numbers::pi * upper_hz / fs);
  const double w0 = std::sqrt(wl * wu);  // analog center
  const double bw = wu - wl;

  SosFilter out;
  out.sections.reserve(static_cast<std::size_t>(n));

  // Upper-half-plane prototype poles; conjugates are implicit in the
  // real-coefficient sections.
  for (int k = 1; k <= n / 2; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + n - 1.0) / (2.0 * n);
    const std::complex<double> proto = std::polar(1.0, theta);

    // Lowpass -> bandpass: each prototype pole yields two analog poles.
    const std::complex<double> bp = bw * proto;
    const std::complex<double> disc = std::sqrt(bp * bp - 4.0 * w0 * w0);
    for (const std::complex<double> s_pole : {0.5 * (bp + disc), 0.5 * (bp - disc)}) {
      const std::complex<double> z_pole = (k2 + s_pole) / (k2 - s_pole);
      Biquad sec;
      sec.a1 = -2.0 * z_pole.real();
      sec.a2 = std::norm(z_pole);
      // One zero at z=+1 (from s=0) and one at z=-1 (from s=inf) per section.
      sec.b0 = 1.0;
      sec.b1 = 0.0;
      sec.b2 = -1.0;
      out.sections.push_back(sec);
    }
  }

  // Normalize to unit gain at the warped center frequency.
  const double f_center = fs / std::numbers::pi * std::atan(w0 / k2);
  const double mag = out.magnitude_at(f_center, fs);
  if (!(mag > 0.0))
    throw Error(errc::config_error, "degenerate bandpass design");
  const double g = std::pow(1.0 / mag, 1.0 / double(out.sections.size()));
  for (auto& sec : out.sections) {
    sec.b0 *= g;
    sec.b2 *= g;
  }
  return out;
}

}  // namespace rirkit
