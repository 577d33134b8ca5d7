#pragma once

// Minimal RIFF/WAVE reader and writer. Reads PCM 16/24/32-bit and IEEE
// float 32-bit, 1-2 channels; writes IEEE float 32-bit. Unknown chunks are
// skipped so files carrying LIST/fact/bext metadata still load.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "rirkit/types.hpp"

namespace rirkit {

namespace detail {

inline std::uint32_t read_u32le(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

inline std::uint16_t read_u16le(const unsigned char* p) {
  return std::uint16_t(p[0] | p[1] << 8);
}

inline void put_u32le(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 24) & 0xff);
}

inline void put_u16le(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}

}  // namespace detail

inline ImpulseResponse load_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(errc::io_error, "cannot open file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw Error(errc::format_error, "not a RIFF/WAVE file: " + path);

  bool have_fmt = false;
  std::uint16_t format_code = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    std::uint32_t size = detail::read_u32le(bytes.data() + pos + 4);
    pos += 8;
    if (pos + size > bytes.size()) {
      // Tolerate a final data chunk whose declared size overruns the file.
      if (std::memcmp(id, "data", 4) == 0)
        size = static_cast<std::uint32_t>(bytes.size() - pos);
      else
        throw Error(errc::format_error, "truncated chunk in WAV file: " + path);
    }
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) throw Error(errc::format_error, "fmt chunk too small: " + path);
      format_code = detail::read_u16le(bytes.data() + pos);
      channels = detail::read_u16le(bytes.data() + pos + 2);
      sample_rate = detail::read_u32le(bytes.data() + pos + 4);
      bits = detail::read_u16le(bytes.data() + pos + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0 && data == nullptr) {
      data = bytes.data() + pos;
      data_size = size;
      // keep scanning: fmt legally may follow data
    }
    pos += size + (size & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw Error(errc::format_error, "missing fmt chunk: " + path);
  if (data == nullptr) throw Error(errc::format_error, "missing data chunk: " + path);
  if (channels < 1 || channels > 2)
    throw Error(errc::unsupported_format,
                "unsupported channel count " + std::to_string(channels) + ": " + path);
  if (sample_rate == 0) throw Error(errc::format_error, "zero sample rate: " + path);

  const bool pcm = format_code == 1 && (bits == 16 || bits == 24 || bits == 32);
  const bool ieee = format_code == 3 && bits == 32;
  if (!pcm && !ieee)
    throw Error(errc::unsupported_format, "unsupported encoding (format " +
                                              std::to_string(format_code) + ", " +
                                              std::to_string(bits) + " bit): " + path);

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_size = bytes_per_sample * channels;
  const std::size_t frames = data_size / frame_size;
  if (frames == 0) throw Error(errc::empty_input, "WAV file contains no samples: " + path);

  ImpulseResponse ir;
  ir.sample_rate = static_cast<int>(sample_rate);
  ir.samples.assign(channels, std::vector<double>(frames));

  for (std::size_t n = 0; n < frames; ++n) {
    for (std::uint16_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + n * frame_size + c * bytes_per_sample;
      double v = 0.0;
      if (ieee) {
        std::uint32_t u = detail::read_u32le(p);
        float fv;
        std::memcpy(&fv, &u, 4);
        v = fv;
      } else if (bits == 16) {
        std::int16_t s = static_cast<std::int16_t>(detail::read_u16le(p));
        v = s / 32768.0;
      } else if (bits == 24) {
        std::int32_t s = p[0] | p[1] << 8 | p[2] << 16;
        if (s & 0x800000) s |= ~0xffffff;  // sign-extend
        v = s / 8388608.0;
      } else {  // 32-bit PCM
        std::int32_t s = static_cast<std::int32_t>(detail::read_u32le(p));
        v = s / 2147483648.0;
      }
      ir.samples[c][n] = v;
    }
  }
  return ir;
}

// Writes 32-bit IEEE float WAV at the signal's native rate.
inline void save_wav(const std::string& path, const ImpulseResponse& ir) {
  check_signal(ir);
  const std::uint16_t channels = static_cast<std::uint16_t>(ir.channel_count());
  const std::uint32_t frames = static_cast<std::uint32_t>(ir.length());
  const std::uint32_t data_size = frames * channels * 4;

  std::vector<unsigned char> out;
  out.reserve(60 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  detail::put_u32le(out, 4 + (8 + 16) + (8 + 4) + (8 + data_size));
  out.insert(out.end(), {'W', 'A', 'V', 'E'});

  out.insert(out.end(), {'f', 'm', 't', ' '});
  detail::put_u32le(out, 16);
  detail::put_u16le(out, 3);  // IEEE float
  detail::put_u16le(out, channels);
  detail::put_u32le(out, static_cast<std::uint32_t>(ir.sample_rate));
  detail::put_u32le(out, static_cast<std::uint32_t>(ir.sample_rate) * channels * 4);
  detail::put_u16le(out, channels * 4);
  detail::put_u16le(out, 32);

  // fact chunk is required for non-PCM encodings
  out.insert(out.end(), {'f', 'a', 'c', 't'});
  detail::put_u32le(out, 4);
  detail::put_u32le(out, frames);

  out.insert(out.end(), {'d', 'a', 't', 'a'});
  detail::put_u32le(out, data_size);
  for (std::uint32_t n = 0; n < frames; ++n) {
    for (std::uint16_t c = 0; c < channels; ++c) {
      float fv = static_cast<float>(ir.samples[c][n]);
      std::uint32_t u;
      std::memcpy(&u, &fv, 4);
      detail::put_u32le(out, u);
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(errc::io_error, "cannot open file for writing: " + path);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(errc::io_error, "write failed: " + path);
}

}  // namespace rirkit
