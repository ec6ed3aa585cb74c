#pragma once

#include <bit>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "curvegeom/error.hpp"

namespace curvegeom::detail {

using cplx = std::complex<double>;

// In-place iterative radix-2 Cooley-Tukey; n must be a power of two.
inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / double(len) * (inverse ? 1.0 : -1.0);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k], v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= double(n);
}

// Direct DFT fallback for non-power-of-two sizes. O(n^2), used rarely.
inline std::vector<cplx> dft_direct(std::span<const cplx> in, bool inverse) {
  const std::size_t n = in.size();
  std::vector<cplx> out(n);
  const double sgn = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc(0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sgn * 2.0 * std::numbers::pi * double(k) * double(j) / double(n);
      acc += in[j] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = inverse ? acc / double(n) : acc;
  }
  return out;
}

inline std::vector<cplx> fft(std::vector<cplx> a, bool inverse) {
  if (std::has_single_bit(a.size())) {
    fft_pow2(a, inverse);
    return a;
  }
  return dft_direct(a, inverse);
}

// Signed wavenumber of bin k for an m-point transform (Nyquist kept positive).
inline long dft_wavenumber(std::size_t k, std::size_t m) {
  return (k <= m / 2) ? long(k) : long(k) - long(m);
}

// Derivative of a smooth periodic sample set via the Fourier transform.
// The Nyquist mode is zeroed for odd derivative orders.
inline std::vector<double> spectral_derivative(std::span<const double> values, double period,
                                               int order = 1) {
  const std::size_t m = values.size();
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "spectral derivative needs >= 2 samples");
  std::vector<cplx> a(m);
  for (std::size_t k = 0; k < m; ++k) a[k] = values[k];
  a = fft(std::move(a), false);
  const double w0 = 2.0 * std::numbers::pi / period;
  for (std::size_t k = 0; k < m; ++k) {
    const long j = dft_wavenumber(k, m);
    cplx factor = std::pow(cplx(0.0, w0 * double(j)), order);
    if (m % 2 == 0 && k == m / 2 && order % 2 == 1) factor = 0.0;
    a[k] *= factor;
  }
  a = fft(std::move(a), true);
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = a[k].real();
  return out;
}

// Real trigonometric interpolation coefficients:
//   f(t) = cos_c[0] + sum_j cos_c[j] cos(2*pi*j*t/P) + sin_c[j] sin(2*pi*j*t/P)
// Exact at the m uniform sample nodes.
struct TrigCoeffs {
  std::vector<double> cos_c, sin_c;  // index = harmonic j, sin_c[0] unused (0)
};

inline TrigCoeffs trig_interpolate(std::span<const double> values) {
  const std::size_t m = values.size();
  std::vector<cplx> a(m);
  for (std::size_t k = 0; k < m; ++k) a[k] = values[k];
  a = fft(std::move(a), false);
  const std::size_t nmode = m / 2;
  TrigCoeffs c;
  c.cos_c.assign(nmode + 1, 0.0);
  c.sin_c.assign(nmode + 1, 0.0);
  c.cos_c[0] = a[0].real() / double(m);
  for (std::size_t j = 1; j <= nmode; ++j) {
    const bool nyquist = (m % 2 == 0 && j == nmode);
    const double scale = nyquist ? 1.0 / double(m) : 2.0 / double(m);
    c.cos_c[j] = scale * a[j].real();
    c.sin_c[j] = nyquist ? 0.0 : -scale * a[j].imag();
  }
  return c;
}

}  // namespace curvegeom::detail
