#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "curvegeom/curve.hpp"
#include "curvegeom/detail/fft.hpp"

namespace curvegeom {

enum class FrameKind { frenet, parallel, custom };

inline constexpr double kOverlapFloor = 1e-3;    // below this the phase branch is not certified
inline constexpr double kExactZeroOverlap = 1e-12;
inline constexpr int kPhaseMaxGrid = 1 << 14;

/// Orthonormal normal frame (U, V) along a sampled closed curve, stored on
/// m+1 nodes with the last node at t = period. V = T x U at every node.
/// closure_angle is the principal angle by which (U, V) at t = period is
/// rotated about T(0) relative to (U(0), V(0)).
struct FrameField {
  SamplesPtr samples;
  std::vector<Vec3> U, V;
  FrameKind kind = FrameKind::custom;
  double closure_angle = 0.0;
  std::function<FrameField(int)> rebuild;  // same construction at a finer grid

  int m() const { return samples->m; }
  bool closes(double tol = 1e-6) const { return std::abs(closure_angle) < tol; }
};

namespace detail {

inline double principal_closure(const FrameField& f) {
  const Vec3& Um = f.U.back();
  return std::atan2(Um.dot(f.V[0]), Um.dot(f.U[0]));
}

inline Vec3 any_normal(const Vec3& T) {
  int i = std::abs(T.x()) < std::abs(T.y()) ? 0 : 1;
  if (std::abs(T.z()) < std::abs(T[i])) i = 2;
  Vec3 e = Vec3::Zero();
  e[i] = 1.0;
  return (e - e.dot(T) * T).normalized();
}

}  // namespace detail

/// Frenet-Serret frame U = N, V = B. Fails where curvature vanishes.
inline FrameField frenet_frame(const SamplesPtr& samples) {
  const auto& cs = *samples;
  for (int k = 0; k < cs.m; ++k)
    if (cs.kappa[k] < kInflexionKappaFloor)
      throw Error(ErrorCode::InflexionPoint,
                  "Frenet frame undefined near t = " + std::to_string(cs.t[k]) +
                      " (kappa = " + std::to_string(cs.kappa[k]) + ")");
  FrameField f;
  f.samples = samples;
  f.kind = FrameKind::frenet;
  f.U.resize(cs.m + 1);
  f.V.resize(cs.m + 1);
  for (int k = 0; k < cs.m; ++k) {
    const Vec3 B = cs.r1[k].cross(cs.r2[k]).normalized();
    f.V[k] = B;
    f.U[k] = B.cross(cs.T[k]);
  }
  f.U[cs.m] = f.U[0];
  f.V[cs.m] = f.V[0];
  f.closure_angle = 0.0;
  f.rebuild = [spec = cs.spec](int m2) { return frenet_frame(sample_curve(spec, m2)); };
  return f;
}

/// Parallel (Fermi-Walker) transport of U0 along the curve. Double-reflection
/// stepping: reflections preserve norms exactly and the per-step twist error
/// is O(h^4), which keeps the residual twist below 1e-8 even at modest grids.
inline FrameField parallel_transport_frame(const SamplesPtr& samples, const Vec3& U0_in) {
  const auto& cs = *samples;
  const Vec3 T0 = cs.T[0];
  if (U0_in.norm() < 1e-12 || std::abs(U0_in.normalized().dot(T0)) > 1e-8)
    throw Error(ErrorCode::InvalidArgument, "U0 must be a unit vector perpendicular to the initial tangent");
  FrameField f;
  f.samples = samples;
  f.kind = FrameKind::parallel;
  f.U.resize(cs.m + 1);
  f.V.resize(cs.m + 1);
  f.U[0] = (U0_in - U0_in.dot(T0) * T0).normalized();
  f.V[0] = T0.cross(f.U[0]);
  for (int k = 0; k < cs.m; ++k) {
    const Vec3& ra = cs.r[k];
    const Vec3& rb = cs.r[(k + 1) % cs.m];
    const Vec3& Ta = cs.T[k];
    const Vec3& Tb = cs.T[(k + 1) % cs.m];
    const Vec3 v1 = rb - ra;
    const double c1 = v1.squaredNorm();
    Vec3 uL = f.U[k], tL = Ta;
    if (c1 > 0.0) {
      uL -= (2.0 / c1) * v1.dot(uL) * v1;
      tL -= (2.0 / c1) * v1.dot(tL) * v1;
    }
    const Vec3 v2 = Tb - tL;
    const double c2 = v2.squaredNorm();
    Vec3 u = (c2 > 1e-30) ? Vec3(uL - (2.0 / c2) * v2.dot(uL) * v2) : uL;
    u -= u.dot(Tb) * Tb;
    u.normalize();
    f.U[k + 1] = u;
    f.V[k + 1] = Tb.cross(u);
  }
  f.closure_angle = detail::principal_closure(f);
  f.rebuild = [spec = cs.spec, U0 = f.U[0]](int m2) {
    return parallel_transport_frame(sample_curve(spec, m2), U0);
  };
  return f;
}

inline FrameField parallel_transport_frame(const SamplesPtr& samples) {
  return parallel_transport_frame(samples, detail::any_normal(samples->T[0]));
}

/// Rotate a frame about the tangent by eta(t): U -> U cos(eta) + V sin(eta).
/// A frame stays closed iff eta(period) - eta(0) is an integer multiple of 2*pi.
inline FrameField gauge_rotate(const FrameField& frame, std::function<double(double)> eta) {
  const auto& cs = *frame.samples;
  FrameField f;
  f.samples = frame.samples;
  f.kind = FrameKind::custom;
  f.U.resize(cs.m + 1);
  f.V.resize(cs.m + 1);
  for (int k = 0; k <= cs.m; ++k) {
    const double tk = (k == cs.m) ? cs.period() : cs.t[k];
    const double e = eta(tk), c = std::cos(e), s = std::sin(e);
    f.U[k] = frame.U[k] * c + frame.V[k] * s;
    f.V[k] = -frame.U[k] * s + frame.V[k] * c;
  }
  f.closure_angle = detail::principal_closure(f);
  if (frame.rebuild) {
    f.rebuild = [inner = frame.rebuild, eta](int m2) { return gauge_rotate(inner(m2), eta); };
  }
  return f;
}

/// Parallel frame with its closure mismatch distributed linearly in t, so the
/// result is a smooth closed frame (constant extra twist rate, total
/// -closure_angle/2*pi turns).
inline FrameField closed_parallel_frame(const SamplesPtr& samples) {
  FrameField p = parallel_transport_frame(samples);
  const double theta = p.closure_angle;
  const double P = samples->period();
  FrameField f = gauge_rotate(p, [theta, P](double t) { return -theta * t / P; });
  f.rebuild = [spec = samples->spec](int m2) {
    return closed_parallel_frame(sample_curve(spec, m2));
  };
  return f;
}

struct PhaseResult {
  double total_phase = 0.0;     // turns, continuously unwrapped
  double fractional_part = 0.0; // (-1/2, 1/2]
  long winding = 0;
  double min_overlap = 0.0;     // smallest certified |Q*(0).Q(t)| on the grid
  bool bridged = false;         // an exact overlap zero was bridged
};

namespace detail {

// Overlap z(t) = <Q(t)|Q(0)> for Q = (U + iV)/sqrt(2); the phase of z is the
// angle accumulated by the frame about the tangent, measured so that a gauge
// rotation by eta adds +eta to the phase.
inline std::vector<std::complex<double>> frame_overlaps(const FrameField& f) {
  const int m = f.m();
  std::vector<std::complex<double>> z(m + 1);
  const Vec3 U0 = f.U[0], V0 = f.V[0];
  for (int k = 0; k <= m; ++k) {
    const double re = 0.5 * (U0.dot(f.U[k]) + V0.dot(f.V[k]));
    const double im = 0.5 * (V0.dot(f.U[k]) - U0.dot(f.V[k]));
    z[k] = {re, im};
  }
  return z;
}

enum class UnwrapStatus { ok, refine, overlap_fail };

struct UnwrapResult {
  UnwrapStatus status = UnwrapStatus::ok;
  double total = 0.0;       // radians
  double min_overlap = 1.0; // global minimum, pinch nodes included
  bool bridged = false;
  std::string why;
};

// Unwrap arg z along the node sequence. Each step must rotate by less than
// pi/2 and move z by less than 0.6 of its distance to the origin (the second
// test catches sub-step loops around the origin near overlap pinches).
// Contiguous runs of nodes below the overlap floor are bridged when short and
// when the bridge angle stays below pi/2; symmetric frames (a planar circle)
// pass exactly through zero and have no resolvable branch there.
inline UnwrapResult unwrap_overlap(const std::vector<std::complex<double>>& z, double period,
                                   double h) {
  UnwrapResult res;
  const int last = int(z.size()) - 1;
  for (const auto& zz : z) res.min_overlap = std::min(res.min_overlap, std::abs(zz));
  int k = 0;
  while (k < last) {
    int j = k + 1;
    if (std::abs(z[j]) < kOverlapFloor && j < last) {
      while (j <= last && std::abs(z[j]) < kOverlapFloor) ++j;
      if (j > last) {
        res.status = UnwrapStatus::overlap_fail;
        res.why = "overlap vanishes at the closing node";
        return res;
      }
      if ((j - k) * h > 0.05 * period) {
        res.status = UnwrapStatus::overlap_fail;
        res.why = "extended run of vanishing overlap";
        return res;
      }
      const double inc = std::arg(z[j] * std::conj(z[k]));
      if (std::abs(inc) >= 0.5 * std::numbers::pi) {
        res.status = UnwrapStatus::overlap_fail;
        res.why = "ambiguous branch across an overlap pinch";
        return res;
      }
      res.total += inc;
      res.bridged = true;
      k = j;
      continue;
    }
    const double za = std::abs(z[k]), zb = std::abs(z[j]);
    const double inc = std::arg(z[j] * std::conj(z[k]));
    const bool angle_ok = std::abs(inc) < 0.5 * std::numbers::pi;
    const bool step_ok = std::abs(z[j] - z[k]) < 0.6 * std::min(za, zb);
    if (!angle_ok || !step_ok) {
      res.status = UnwrapStatus::refine;
      return res;
    }
    res.total += inc;
    ++k;
  }
  return res;
}

}  // namespace detail

/// Total phase of the frame overlap, in turns, continuously unwrapped from
/// t = 0. Refines by rebuilding the frame on doubled grids up to kPhaseMaxGrid.
inline PhaseResult total_phase(const FrameField& frame) {
  FrameField work;
  const FrameField* cur = &frame;
  for (;;) {
    const auto z = detail::frame_overlaps(*cur);
    const auto uw = detail::unwrap_overlap(z, cur->samples->period(), cur->samples->h());
    if (uw.status == detail::UnwrapStatus::ok) {
      PhaseResult out;
      out.min_overlap = uw.min_overlap;
      out.bridged = uw.bridged;
      out.fractional_part = std::arg(z.back()) / (2.0 * std::numbers::pi);
      const double turns = uw.total / (2.0 * std::numbers::pi);
      out.winding = std::lround(turns - out.fractional_part);
      out.total_phase = double(out.winding) + out.fractional_part;
      return out;
    }
    if (uw.status == detail::UnwrapStatus::overlap_fail)
      throw Error(ErrorCode::OverlapVanishes, uw.why);
    if (!cur->rebuild || 2 * cur->m() > kPhaseMaxGrid)
      throw Error(ErrorCode::NotConverged,
                  "phase unwrap not resolved at grid cap " + std::to_string(cur->m()) +
                      " (min overlap " + std::to_string(uw.min_overlap) + ")");
    work = cur->rebuild(2 * cur->m());
    cur = &work;
  }
}

namespace detail {

inline double frenet_twist(const CurveSamples& cs) {
  double acc = 0.0;
  for (int k = 0; k < cs.m; ++k) acc += cs.tau[k] * cs.v[k];
  return acc * cs.h() / (2.0 * std::numbers::pi);
}

inline double spectral_twist(const FrameField& f) {
  const auto& cs = *f.samples;
  const int m = cs.m;
  std::vector<double> ux(m), uy(m), uz(m);
  for (int k = 0; k < m; ++k) {
    ux[k] = f.U[k].x();
    uy[k] = f.U[k].y();
    uz[k] = f.U[k].z();
  }
  const auto dx = spectral_derivative(ux, cs.period());
  const auto dy = spectral_derivative(uy, cs.period());
  const auto dz = spectral_derivative(uz, cs.period());
  double acc = 0.0;
  for (int k = 0; k < m; ++k)
    acc += f.V[k].x() * dx[k] + f.V[k].y() * dy[k] + f.V[k].z() * dz[k];
  return acc * cs.h() / (2.0 * std::numbers::pi);
}

// Twist of a non-closing frame: total rotation relative to a reference frame
// of known twist, read off from the unwrapped relative angle.
inline double relative_twist(const FrameField& f) {
  const auto& cs = *f.samples;
  FrameField ref;
  double ref_twist = 0.0;
  if (cs.kappa_min() > kInflexionKappaFloor) {
    ref = frenet_frame(f.samples);
    ref_twist = frenet_twist(cs);
  } else {
    ref = closed_parallel_frame(f.samples);
    FrameField p = parallel_transport_frame(f.samples);
    ref_twist = -p.closure_angle / (2.0 * std::numbers::pi);
  }
  const int m = cs.m;
  std::vector<double> psi(m + 1);
  for (int k = 0; k <= m; ++k)
    psi[k] = std::atan2(f.U[k].dot(ref.V[k]), f.U[k].dot(ref.U[k]));
  double total = psi[0];
  double prev = psi[0];
  for (int k = 1; k <= m; ++k) {
    double d = psi[k] - prev;
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    if (std::abs(d) >= 0.5 * std::numbers::pi) {
      if (f.rebuild && 2 * m <= kPhaseMaxGrid) return relative_twist(f.rebuild(2 * m));
      throw Error(ErrorCode::NotConverged, "relative frame angle under-resolved");
    }
    total += d;
    prev = psi[k];
  }
  return ref_twist + (total - psi[0]) / (2.0 * std::numbers::pi);
}

}  // namespace detail

/// Twist in turns: (1/2*pi) of the integral of (T x U).U' along the curve.
/// Frenet frames use the torsion quadrature, closed frames spectral
/// differentiation of U, non-closing frames the relative-angle route.
inline double twist(const FrameField& frame) {
  if (frame.kind == FrameKind::frenet) return detail::frenet_twist(*frame.samples);
  if (frame.closes()) return detail::spectral_twist(frame);
  return detail::relative_twist(frame);
}

/// Frame-independent twist Tw_g = Tw - phi_T. Uses the Frenet route away from
/// inflexions, otherwise the parallel-frame route (which needs no Frenet data).
inline double gauge_invariant_twist(const SamplesPtr& samples) {
  if (samples->kappa_min() > 1e-6) {
    FrameField f = frenet_frame(samples);
    return twist(f) - total_phase(f).total_phase;
  }
  FrameField p = parallel_transport_frame(samples);
  return -total_phase(p).total_phase;
}

inline double geometric_phase(const SamplesPtr& samples) {
  return -gauge_invariant_twist(samples);
}

}  // namespace curvegeom
