#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rirkit {

// Error taxonomy shared by all modules. Every failure carries a stable code
// so callers (and the CLI exit-code mapping) never need to match on strings.
enum class errc {
  format_error,
  unsupported_format,
  empty_input,
  degenerate_input,
  insufficient_decay_range,
  band_out_of_range,
  channel_count,
  config_error,
  placement_error,
  length_error,
  schema_error,
  io_error,
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

class InsufficientDecayRange : public Error {
public:
  InsufficientDecayRange(const std::string& what, double deepest_db)
      : Error(errc::insufficient_decay_range, what), deepest_db_(deepest_db) {}

  // Deepest level the curve actually reaches before running out of signal.
  double deepest_db() const noexcept { return deepest_db_; }

private:
  double deepest_db_;
};

// Sampled amplitude signal, 1 or 2 channels, values nominally in [-1, 1].
struct ImpulseResponse {
  std::vector<std::vector<double>> samples;  // one vector per channel, equal lengths
  int sample_rate = 0;                       // Hz

  int channel_count() const { return static_cast<int>(samples.size()); }
  std::size_t length() const { return samples.empty() ? 0 : samples[0].size(); }
  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(length()) / sample_rate : 0.0;
  }

  const std::vector<double>& mono() const {
    if (samples.size() != 1)
      throw Error(errc::channel_count,
                  "expected a mono signal, got " + std::to_string(samples.size()) + " channels");
    return samples[0];
  }
};

inline ImpulseResponse make_mono(std::vector<double> samples, int sample_rate) {
  ImpulseResponse ir;
  ir.samples.push_back(std::move(samples));
  ir.sample_rate = sample_rate;
  return ir;
}

inline ImpulseResponse make_stereo(std::vector<double> left, std::vector<double> right,
                                   int sample_rate) {
  if (left.size() != right.size())
    throw Error(errc::format_error, "stereo channels must have equal length");
  ImpulseResponse ir;
  ir.samples.push_back(std::move(left));
  ir.samples.push_back(std::move(right));
  ir.sample_rate = sample_rate;
  return ir;
}

// Structural checks shared by the analysis entry points: positive rate,
// 1-2 channels of equal nonzero length, all values finite.
inline void check_signal(const ImpulseResponse& ir) {
  if (ir.sample_rate <= 0) throw Error(errc::format_error, "sample rate must be positive");
  if (ir.samples.empty() || ir.samples.size() > 2)
    throw Error(errc::channel_count,
                "signal must have 1 or 2 channels, got " + std::to_string(ir.samples.size()));
  const std::size_t len = ir.samples[0].size();
  if (len == 0) throw Error(errc::empty_input, "signal has no samples");
  for (const auto& ch : ir.samples) {
    if (ch.size() != len)
      throw Error(errc::format_error, "all channels must have equal length");
    for (double v : ch)
      if (!std::isfinite(v)) throw Error(errc::format_error, "signal contains non-finite samples");
  }
}

inline double joint_peak(const ImpulseResponse& ir) {
  double peak = 0.0;
  for (const auto& ch : ir.samples)
    for (double v : ch) peak = std::max(peak, std::fabs(v));
  return peak;
}

inline double signal_energy(const std::vector<double>& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

// What preprocess() did to the signal.
struct PreprocessReport {
  std::size_t samples_trimmed_leading = 0;
  bool truncated = false;
  double peak_before_normalize = 0.0;
  int original_sample_rate = 0;
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Rectangular (shoebox) room with one source and one receiver.
struct RoomGeometry {
  double length = 0.0, width = 0.0, height = 0.0;  // meters
  Vec3 source, receiver;

  double volume_m3() const { return length * width * height; }
  double surface_area_m2() const {
    return 2.0 * (length * width + length * height + width * height);
  }
  double source_receiver_distance_m() const { return distance(source, receiver); }
};

inline bool strictly_inside(const RoomGeometry& g, const Vec3& p) {
  return p.x > 0.0 && p.x < g.length && p.y > 0.0 && p.y < g.width && p.z > 0.0 &&
         p.z < g.height;
}

inline void validate_geometry(const RoomGeometry& g) {
  if (!(g.length > 0.0 && g.width > 0.0 && g.height > 0.0))
    throw Error(errc::config_error, "room dimensions must be positive");
  if (!strictly_inside(g, g.source))
    throw Error(errc::config_error, "source must lie strictly inside the room");
  if (!strictly_inside(g, g.receiver))
    throw Error(errc::config_error, "receiver must lie strictly inside the room");
}

}  // namespace rirkit
