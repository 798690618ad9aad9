#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "tdho/field.hpp"

namespace tdho {
namespace detail {

// Iterative radix-2 transform; grids guarantee power-of-two lengths. Twiddle
// and bit-reversal tables are cached per length behind a mutex (read-mostly).
struct FftTables {
  std::vector<int> bitrev;
  std::vector<Complex> twiddle;  // e^{-2 pi i k / n}, k < n/2

  explicit FftTables(int n) : bitrev(n), twiddle(n / 2) {
    int logn = 0;
    while ((1 << logn) < n) ++logn;
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < logn; ++b)
        if (i & (1 << b)) r |= 1 << (logn - 1 - b);
      bitrev[i] = r;
    }
    for (int k = 0; k < n / 2; ++k) {
      double ang = -2.0 * M_PI * k / n;
      twiddle[k] = Complex(std::cos(ang), std::sin(ang));
    }
  }
};

inline const FftTables& fft_tables(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<FftTables>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<FftTables>(n)).first;
  return *it->second;
}

// In-place DFT of one contiguous line: X_k = sum_j x_j e^{-+2 pi i jk/n}.
inline void fft_line(Complex* a, int n, bool inverse) {
  const FftTables& tb = fft_tables(n);
  for (int i = 0; i < n; ++i) {
    int r = tb.bitrev[i];
    if (i < r) std::swap(a[i], a[r]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    int half = len >> 1;
    int step = n / len;
    for (int base = 0; base < n; base += len) {
      for (int k = 0; k < half; ++k) {
        Complex w = tb.twiddle[k * step];
        if (inverse) w = std::conj(w);
        Complex u = a[base + k];
        Complex v = a[base + k + half] * w;
        a[base + k] = u + v;
        a[base + k + half] = u - v;
      }
    }
  }
}

// Applies a contiguous-line kernel along `axis` of a row-major d-dim cube.
template <typename LineOp>
inline void for_each_line(std::vector<Complex>& data, const Grid& g, int axis, LineOp&& op) {
  int n = g.n;
  std::size_t stride = 1;
  for (int a = g.d - 1; a > axis; --a) stride *= n;
  std::size_t outer = data.size() / (static_cast<std::size_t>(n) * stride);
  std::vector<Complex> line(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) {
      std::size_t base = o * n * stride + s;
      if (stride == 1) {
        op(&data[base]);
      } else {
        for (int j = 0; j < n; ++j) line[j] = data[base + j * stride];
        op(line.data());
        for (int j = 0; j < n; ++j) data[base + j * stride] = line[j];
      }
    }
  }
}

}  // namespace detail
}  // namespace tdho
