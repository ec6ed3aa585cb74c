#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "curvegeom/curve.hpp"

namespace curvegeom {

/// Closed strip with n half-twists, half-width alpha, ring radius R.
struct StripParams {
  int n = 1;
  double alpha = 0.5;
  double R = 1.0;
};

enum class Edge { plus, minus };

namespace strip {

// Near-inflexion expansion constants for n = 1, R = 1 at
// (alpha_c, t_c) = (4/5, 2*pi), from the exact series of kappa^2 and tau:
//   kappa ~ kappa_prefactor * sqrt[(a-a_c)^2 + 9 b^2 v_c^2 (t-t_c)^2]
//   tau   ~ 3 b (a-a_c) / [(a-a_c)^2 + 9 b^2 v_c^2 (t-t_c)^2]
inline constexpr double kTaylorB = 6.0 / 25.0;
inline constexpr double kKappaPrefactor = 25.0 / 4.0;
inline const double kCriticalSpeed = 1.0 / std::sqrt(5.0);  // |dr/dt| at (alpha_c, t_c)

inline constexpr double kAlphaWindow = 0.1;  // validity window of the expansions
inline constexpr double kTWindow = 0.3;

}  // namespace strip

inline double strip_critical_alpha(int n, double R = 1.0) {
  return R * 4.0 / (4.0 + double(n) * double(n));
}

/// Boundary curve of the n-half-twist strip at w = +/- alpha, as a closed
/// analytic curve. Odd n has a single boundary covering both sheets over one
/// 4*pi traversal (the plus parametrization is returned for either edge);
/// even n has two distinct 2*pi boundaries.
inline CurveSpec strip_boundary(const StripParams& p, Edge edge = Edge::plus) {
  if (p.n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  if (!(p.alpha > 0.0) || !(p.R > 0.0))
    throw Error(ErrorCode::InvalidArgument, "alpha and R must be positive");
  const bool odd = (p.n % 2 == 1);
  const double w = (odd || edge == Edge::plus) ? p.alpha : -p.alpha;
  const double n2 = 0.5 * p.n;
  const double R = p.R;

  CurveSpec spec;
  spec.period = odd ? 4.0 * std::numbers::pi : 2.0 * std::numbers::pi;
  spec.label = "strip_boundary(n=" + std::to_string(p.n) + ",alpha=" + std::to_string(p.alpha) +
               (odd ? "" : (edge == Edge::plus ? ",edge=+" : ",edge=-")) + ")";
  spec.eval = [w, n2, R](double t) {
    const double c = std::cos(n2 * t), s = std::sin(n2 * t);
    const double rho = R + w * c;
    return Vec3(rho * std::cos(t), rho * std::sin(t), -w * s);
  };
  spec.deriv1 = [w, n2, R](double t) {
    const double c = std::cos(n2 * t), s = std::sin(n2 * t);
    const double rho = R + w * c, rho1 = -w * n2 * s;
    return Vec3(rho1 * std::cos(t) - rho * std::sin(t), rho1 * std::sin(t) + rho * std::cos(t),
                -w * n2 * c);
  };
  spec.deriv2 = [w, n2, R](double t) {
    const double c = std::cos(n2 * t), s = std::sin(n2 * t);
    const double rho = R + w * c, rho1 = -w * n2 * s, rho2 = -w * n2 * n2 * c;
    return Vec3(rho2 * std::cos(t) - 2.0 * rho1 * std::sin(t) - rho * std::cos(t),
                rho2 * std::sin(t) + 2.0 * rho1 * std::cos(t) - rho * std::sin(t),
                w * n2 * n2 * s);
  };
  spec.deriv3 = [w, n2, R](double t) {
    const double c = std::cos(n2 * t), s = std::sin(n2 * t);
    const double rho = R + w * c, rho1 = -w * n2 * s, rho2 = -w * n2 * n2 * c,
                 rho3 = w * n2 * n2 * n2 * s;
    return Vec3(
        rho3 * std::cos(t) - 3.0 * rho2 * std::sin(t) - 3.0 * rho1 * std::cos(t) + rho * std::sin(t),
        rho3 * std::sin(t) + 3.0 * rho2 * std::cos(t) - 3.0 * rho1 * std::sin(t) - rho * std::cos(t),
        w * n2 * n2 * n2 * c);
  };
  return spec;
}

/// Critical half-width data. t_c lists every curvature zero at alpha_c; for
/// even n the two boundary curves carry n/2 zeros each and both are scanned.
struct CriticalData {
  double alpha_c = 0.0;
  std::vector<double> t_c;
  std::optional<double> b;  // n = 1 only
  double v_c = 0.0;
};

inline CriticalData critical_data(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  CriticalData out;
  out.alpha_c = strip_critical_alpha(n);
  const StripParams p{n, out.alpha_c, 1.0};
  const int m = 8192;
  const double tol = 1e-3;
  auto scan = [&](Edge e) {
    const auto samples = sample_curve(strip_boundary(p, e), m);
    for (const auto& pt : detect_inflexions(*samples, tol).points) out.t_c.push_back(pt.t_star);
  };
  scan(Edge::plus);
  if (n % 2 == 0) scan(Edge::minus);
  std::sort(out.t_c.begin(), out.t_c.end());
  if (n == 1) out.b = strip::kTaylorB;
  if (!out.t_c.empty()) {
    const CurveSpec spec = strip_boundary(p, Edge::plus);
    out.v_c = spec.deriv1(out.t_c.front()).norm();
  }
  return out;
}

struct AsymptoticPrediction {
  double kappa_pred = 0.0;
  double tau_pred = 0.0;
};

/// Leading-order curvature/torsion near the n = 1 inflexion (alpha_c = 4/5,
/// t_c = 2*pi). Only valid in a small window around the critical point.
inline AsymptoticPrediction asymptotic_kappa_tau(double alpha, double t) {
  const double ac = strip_critical_alpha(1);
  const double tc = 2.0 * std::numbers::pi;
  const double da = alpha - ac, u = t - tc;
  if (std::abs(da) > strip::kAlphaWindow || std::abs(u) > strip::kTWindow)
    throw Error(ErrorCode::OutsideWindow, "asymptotic forms hold only near (alpha_c, t_c)");
  const double b = strip::kTaylorB, vc = strip::kCriticalSpeed;
  const double denom = da * da + 9.0 * b * b * vc * vc * u * u;
  AsymptoticPrediction out;
  out.kappa_pred = strip::kKappaPrefactor * std::sqrt(denom);
  out.tau_pred = (denom > 0.0) ? 3.0 * b * da / denom : 0.0;
  return out;
}

namespace detail {

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0) throw Error(ErrorCode::NotConverged, "window quadrature depth cap");
  if (std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate_adaptive(F&& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

struct WindowAngle {
  double angle = 0.0;       // integral of tau * v over [t_c - t0, t_c + t0], radians
  double prediction = 0.0;  // leading-order 2*atan(3 b v_c t0 / (alpha - alpha_c))
};

/// Twist angle of the (N, B) plane across the near-inflexion torsion spike of
/// the n = 1 boundary. Approaches -pi below alpha_c and +pi above it; the
/// 2*pi jump across alpha_c is independent of t0.
inline WindowAngle torsion_window_angle(double alpha, double t0) {
  const double ac = strip_critical_alpha(1);
  if (!(t0 > 0.0) || t0 > strip::kTWindow)
    throw Error(ErrorCode::InvalidArgument, "t0 must lie in (0, 0.3]");
  if (std::abs(alpha - ac) < 1e-12)
    throw Error(ErrorCode::InvalidArgument, "alpha_c itself is excluded (tau singular)");
  const double tc = 2.0 * std::numbers::pi;
  const CurveSpec spec = strip_boundary({1, alpha, 1.0});
  auto tauv = [&spec](double t) {
    const Vec3 d1 = spec.deriv1(t), d2 = spec.deriv2(t), d3 = spec.deriv3(t);
    return torsion_at(d1, d2, d3) * d1.norm();
  };
  WindowAngle out;
  // Split at the spike center so the subdivision lands on it immediately.
  out.angle = detail::integrate_adaptive(tauv, tc - t0, tc, 1e-10) +
              detail::integrate_adaptive(tauv, tc, tc + t0, 1e-10);
  const double b = strip::kTaylorB, vc = strip::kCriticalSpeed;
  out.prediction = 2.0 * std::atan(3.0 * b * vc * t0 / (alpha - ac));
  return out;
}

}  // namespace curvegeom
