#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "curvegeom/error.hpp"

namespace curvegeom {

using Vec3 = Eigen::Vector3d;

inline constexpr double kRegularityFloor = 1e-10;      // lower bound on |r'(t)|
inline constexpr double kInflexionKappaFloor = 1e-8;   // kappa below this counts as inflexional
inline constexpr double kClosureTolerance = 1e-7;      // relative seam residual for closed curves

/// A closed parametric space curve with analytic derivatives up to third order.
/// eval and derivN must be smooth and periodic with the stated period.
struct CurveSpec {
  double period = 2.0 * std::numbers::pi;
  std::function<Vec3(double)> eval, deriv1, deriv2, deriv3;
  std::string label;
};

// kappa = |r' x r''| / |r'|^3
inline double curvature_at(const Vec3& r1, const Vec3& r2) {
  const double v = r1.norm();
  if (v <= kRegularityFloor)
    throw Error(ErrorCode::NonRegular, "curvature undefined at zero-speed point");
  return r1.cross(r2).norm() / (v * v * v);
}

// tau = (r' x r'') . r''' / |r' x r''|^2, undefined at inflexions.
inline double torsion_at(const Vec3& r1, const Vec3& r2, const Vec3& r3) {
  const Vec3 cr = r1.cross(r2);
  const double v = r1.norm();
  if (v <= kRegularityFloor)
    throw Error(ErrorCode::NonRegular, "torsion undefined at zero-speed point");
  if (cr.norm() / (v * v * v) < kInflexionKappaFloor)
    throw Error(ErrorCode::InflexionPoint, "torsion undefined at inflexion point");
  return cr.dot(r3) / cr.squaredNorm();
}

/// Uniform samples of a closed curve with local Frenet-Serret data.
/// Immutable after construction; safe to share across threads.
struct CurveSamples {
  CurveSpec spec;
  int m = 0;
  std::vector<double> t, v, s, kappa, tau;
  std::vector<Vec3> r, r1, r2, r3, T;
  double length = 0.0;

  double period() const { return spec.period; }
  double h() const { return spec.period / m; }
  double kappa_min() const {
    double k = kappa.empty() ? 0.0 : kappa[0];
    for (double x : kappa) k = std::min(k, x);
    return k;
  }
};

using SamplesPtr = std::shared_ptr<const CurveSamples>;

inline SamplesPtr sample_curve(const CurveSpec& spec, int m) {
  if (m < 16 || m % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "grid size must be even and >= 16, got " + std::to_string(m));
  if (!(spec.period > 0.0) || !spec.eval || !spec.deriv1 || !spec.deriv2 || !spec.deriv3)
    throw Error(ErrorCode::InvalidArgument, "curve spec is incomplete");

  auto out = std::make_shared<CurveSamples>();
  out->spec = spec;
  out->m = m;
  const double P = spec.period;
  const double h = P / m;

  out->t.resize(m);
  out->v.resize(m);
  out->s.resize(m);
  out->kappa.resize(m);
  out->tau.resize(m);
  out->r.resize(m);
  out->r1.resize(m);
  out->r2.resize(m);
  out->r3.resize(m);
  out->T.resize(m);

  double scale = 1.0;
  for (int k = 0; k < m; ++k) {
    const double tk = k * h;
    out->t[k] = tk;
    out->r[k] = spec.eval(tk);
    out->r1[k] = spec.deriv1(tk);
    out->r2[k] = spec.deriv2(tk);
    out->r3[k] = spec.deriv3(tk);
    scale = std::max(scale, out->r[k].cwiseAbs().maxCoeff());
  }

  // Closure of the position and of every supplied derivative.
  const struct {
    const std::function<Vec3(double)>& f;
    const char* name;
  } checks[] = {{spec.eval, "position"}, {spec.deriv1, "deriv1"}, {spec.deriv2, "deriv2"},
                {spec.deriv3, "deriv3"}};
  for (const auto& c : checks) {
    const double gap = (c.f(P) - c.f(0.0)).norm();
    if (gap > kClosureTolerance * scale)
      throw Error(ErrorCode::NotClosed,
                  std::string(c.name) + " fails closure, residual " + std::to_string(gap));
  }

  for (int k = 0; k < m; ++k) {
    const double vk = out->r1[k].norm();
    if (vk <= kRegularityFloor)
      throw Error(ErrorCode::NonRegular, "zero-speed node at t = " + std::to_string(out->t[k]));
    out->v[k] = vk;
    out->T[k] = out->r1[k] / vk;
    const Vec3 cr = out->r1[k].cross(out->r2[k]);
    const double crn = cr.norm();
    out->kappa[k] = crn / (vk * vk * vk);
    // Torsion defaults to 0 where the curve is (numerically) inflexional;
    // torsion_at still rejects such points when called directly.
    out->tau[k] = (out->kappa[k] < kInflexionKappaFloor) ? 0.0 : cr.dot(out->r3[k]) / (crn * crn);
  }

  double vsum = 0.0;
  for (int k = 0; k < m; ++k) vsum += out->v[k];
  out->length = vsum * h;
  out->s[0] = 0.0;
  for (int k = 1; k < m; ++k) out->s[k] = out->s[k - 1] + 0.5 * h * (out->v[k - 1] + out->v[k]);
  return out;
}

enum class Weight { dt, ds };

/// Periodic trapezoidal rule: uniform mean times the period. Spectrally
/// accurate for smooth periodic integrands.
inline double integrate_periodic(std::span<const double> values, const CurveSamples& samples,
                                 Weight weight) {
  if (values.size() != static_cast<std::size_t>(samples.m))
    throw Error(ErrorCode::LengthMismatch,
                "expected " + std::to_string(samples.m) + " values, got " +
                    std::to_string(values.size()));
  double acc = 0.0;
  if (weight == Weight::dt) {
    for (int k = 0; k < samples.m; ++k) acc += values[k];
  } else {
    for (int k = 0; k < samples.m; ++k) acc += values[k] * samples.v[k];
  }
  return acc * samples.h();
}

struct InflexionReport {
  struct Point {
    double t_star;
    double kappa_min;
  };
  std::vector<Point> points;
  double tolerance = 0.0;
};

/// Local curvature minima below tol. The location is refined by a quadratic
/// fit through kappa^2 at three grid nodes (kappa itself is cusp-like |.|
/// through a zero, kappa^2 is smooth), then kappa is re-evaluated there.
inline InflexionReport detect_inflexions(const CurveSamples& samples, double tol) {
  InflexionReport rep;
  rep.tolerance = tol;
  const int m = samples.m;
  const double h = samples.h();
  for (int k = 0; k < m; ++k) {
    const double y0 = samples.kappa[(k + m - 1) % m], y1 = samples.kappa[k],
                 y2 = samples.kappa[(k + 1) % m];
    if (!(y1 < y0 && y1 <= y2)) continue;
    const double q0 = y0 * y0, q1 = y1 * y1, q2 = y2 * y2;
    const double denom = q0 - 2.0 * q1 + q2;
    double dt = 0.0;
    if (denom > 0.0) dt = std::clamp(0.5 * h * (q0 - q2) / denom, -h, h);
    const double ts = samples.t[k] + dt;
    const double km = curvature_at(samples.spec.deriv1(ts), samples.spec.deriv2(ts));
    if (km < tol) {
      double tw = ts;
      if (tw < 0.0) tw += samples.period();
      if (tw >= samples.period()) tw -= samples.period();
      rep.points.push_back({tw, km});
    }
  }
  // Merge refinements that landed on the same point from adjacent nodes.
  std::sort(rep.points.begin(), rep.points.end(),
            [](const auto& a, const auto& b) { return a.t_star < b.t_star; });
  std::vector<InflexionReport::Point> merged;
  for (const auto& p : rep.points) {
    if (!merged.empty() && std::abs(p.t_star - merged.back().t_star) < 0.75 * h) {
      if (p.kappa_min < merged.back().kappa_min) merged.back() = p;
    } else {
      merged.push_back(p);
    }
  }
  rep.points = std::move(merged);
  return rep;
}

}  // namespace curvegeom
