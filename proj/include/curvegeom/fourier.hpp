#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "curvegeom/curve.hpp"
#include "curvegeom/detail/fft.hpp"

namespace curvegeom {

/// Truncated Fourier series per coordinate,
///   x(t) = sum_j cos_c[j] cos(2*pi*j*t/P) + sin_c[j] sin(2*pi*j*t/P),
/// with term-wise exact derivatives.
struct FourierCurve {
  double period = 2.0 * std::numbers::pi;
  std::array<std::vector<double>, 3> cos_c, sin_c;
  std::string label = "fourier";
};

namespace detail {

inline double eval_series(std::span<const double> cos_c, std::span<const double> sin_c,
                          double omega0, double t, int order) {
  double acc = 0.0;
  const std::size_t n = std::max(cos_c.size(), sin_c.size());
  for (std::size_t j = 0; j < n; ++j) {
    const double a = j < cos_c.size() ? cos_c[j] : 0.0;
    const double b = j < sin_c.size() ? sin_c[j] : 0.0;
    if (a == 0.0 && b == 0.0) continue;
    const double w = omega0 * double(j);
    const double ph = w * t + 0.5 * std::numbers::pi * order;  // d/dt shifts phase by pi/2
    const double wp = order == 0 ? 1.0 : std::pow(w, order);
    acc += wp * (a * std::cos(ph) + b * std::sin(ph));
  }
  return acc;
}

}  // namespace detail

inline CurveSpec fourier_curve(const FourierCurve& fc) {
  if (!(fc.period > 0.0)) throw Error(ErrorCode::InvalidArgument, "period must be positive");
  const double omega0 = 2.0 * std::numbers::pi / fc.period;
  auto make = [fc, omega0](int order) {
    return [fc, omega0, order](double t) {
      return Vec3(detail::eval_series(fc.cos_c[0], fc.sin_c[0], omega0, t, order),
                  detail::eval_series(fc.cos_c[1], fc.sin_c[1], omega0, t, order),
                  detail::eval_series(fc.cos_c[2], fc.sin_c[2], omega0, t, order));
    };
  };
  CurveSpec spec;
  spec.period = fc.period;
  spec.eval = make(0);
  spec.deriv1 = make(1);
  spec.deriv2 = make(2);
  spec.deriv3 = make(3);
  spec.label = fc.label;
  return spec;
}

/// Trigonometric interpolant through uniformly spaced points of a closed
/// curve; exact at the nodes, term-wise differentiable.
inline FourierCurve fourier_interpolate(std::span<const Vec3> points, double period,
                                        const std::string& label = "interpolant") {
  const std::size_t m = points.size();
  if (m < 4) throw Error(ErrorCode::InvalidArgument, "need >= 4 points to interpolate");
  FourierCurve fc;
  fc.period = period;
  fc.label = label;
  std::vector<double> comp(m);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t k = 0; k < m; ++k) comp[k] = points[k][c];
    auto tc = detail::trig_interpolate(comp);
    fc.cos_c[c] = std::move(tc.cos_c);
    fc.sin_c[c] = std::move(tc.sin_c);
  }
  return fc;
}

}  // namespace curvegeom
