#pragma once

// Iterative radix-2 FFT on power-of-two sizes. Twiddles come from a table
// built with std::polar once per call, which keeps the roundoff near machine
// precision even at 2^19 points.

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "rirkit/types.hpp"

namespace rirkit::fft {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline void transform(std::vector<std::complex<double>>& a, bool inverse = false) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw Error(errc::length_error, "FFT size must be a nonzero power of two");
  if (n == 1) return;

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  std::vector<std::complex<double>> twiddle(n / 2);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n / 2; ++k)
    twiddle[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * double(k) / double(n));

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> w = twiddle[k * stride];
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }

  if (inverse) {
    const double inv_n = 1.0 / double(n);
    for (auto& x : a) x *= inv_n;
  }
}

// Forward transform of a real signal zero-padded to `nfft` (power of two).
inline std::vector<std::complex<double>> real_transform(const std::vector<double>& x,
                                                        std::size_t nfft) {
  std::vector<std::complex<double>> a(nfft, {0.0, 0.0});
  const std::size_t m = std::min(x.size(), nfft);
  for (std::size_t i = 0; i < m; ++i) a[i] = {x[i], 0.0};
  transform(a, false);
  return a;
}

// Full linear convolution of two real signals, length |x|+|h|-1.
inline std::vector<double> convolve_real(const std::vector<double>& x,
                                         const std::vector<double>& h) {
  if (x.empty() || h.empty())
    throw Error(errc::empty_input, "convolution inputs must be nonempty");
  const std::size_t out_len = x.size() + h.size() - 1;
  const std::size_t nfft = next_pow2(out_len);
  auto fx = real_transform(x, nfft);
  auto fh = real_transform(h, nfft);
  for (std::size_t i = 0; i < nfft; ++i) fx[i] *= fh[i];
  transform(fx, true);
  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = fx[i].real();
  return out;
}

}  // namespace rirkit::fft
