#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "curvegeom/curve.hpp"
#include "curvegeom/fourier.hpp"
#include "curvegeom/framing.hpp"

namespace curvegeom {

struct ConvergencePolicy {
  double tol = 1e-6;
  int m_max = 1 << 14;
};

namespace detail {

struct Soa {
  std::vector<double> x, y, z, dx, dy, dz;
  explicit Soa(const CurveSamples& cs) {
    const int m = cs.m;
    x.resize(m); y.resize(m); z.resize(m);
    dx.resize(m); dy.resize(m); dz.resize(m);
    for (int k = 0; k < m; ++k) {
      x[k] = cs.r[k].x(); y[k] = cs.r[k].y(); z[k] = cs.r[k].z();
      dx[k] = cs.r1[k].x(); dy[k] = cs.r1[k].y(); dz[k] = cs.r1[k].z();
    }
  }
};

struct Converged {
  double value = 0.0;
  double delta = std::numeric_limits<double>::quiet_NaN();
  int m_used = 0;
  bool converged = false;
};

// Grid-doubling ladder: value(m), value(2m), ... until successive values
// differ by less than tol. Row-sum order inside eval must be deterministic.
template <typename Eval>
Converged converge_ladder(Eval&& eval, int m0, const ConvergencePolicy& pol) {
  Converged out;
  double prev = eval(m0);
  for (int m = 2 * m0; m <= pol.m_max; m *= 2) {
    const double cur = eval(m);
    out.value = cur;
    out.delta = cur - prev;
    out.m_used = m;
    if (std::abs(out.delta) < pol.tol) {
      out.converged = true;
      return out;
    }
    prev = cur;
  }
  return out;  // converged stays false
}

}  // namespace detail

/// Minimum chord length between curve points separated by more than
/// arc_fraction of the total length (close approaches of distant strands).
/// Scans a grid of at most ~2048 nodes; the stride overestimates the true
/// minimum by O(L/2048), well inside the safety margins it feeds.
inline double min_self_distance(const CurveSamples& cs, double arc_fraction = 0.125) {
  const int m = cs.m;
  const int stride = std::max(1, m / 2048);
  const double L = cs.length;
  double best = std::numeric_limits<double>::max();
  for (int i = 0; i < m; i += stride) {
    for (int j = i + stride; j < m; j += stride) {
      double ds = cs.s[j] - cs.s[i];
      ds = std::min(ds, L - ds);
      if (ds < arc_fraction * L) continue;
      best = std::min(best, (cs.r[i] - cs.r[j]).norm());
    }
  }
  return best;
}

/// Writhe on the given grid: double periodic-trapezoid sum of
/// (r'(t1) x r'(t2)) . (r(t1) - r(t2)) / |r(t1) - r(t2)|^3 with zero diagonal
/// (the integrand vanishes linearly there). Deterministic row-wise reduction.
inline double writhe_on_grid(const CurveSamples& cs) {
  const int m = cs.m;
  const detail::Soa q(cs);
  const double floor2 = 1e-12 * cs.length * cs.length;
  std::vector<double> row(m, 0.0);
  bool touch = false;
#pragma omp parallel for schedule(static) reduction(|| : touch)
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int j = i + 1; j < m; ++j) {
      const double ddx = q.x[i] - q.x[j], ddy = q.y[i] - q.y[j], ddz = q.z[i] - q.z[j];
      const double d2 = ddx * ddx + ddy * ddy + ddz * ddz;
      if (d2 < floor2 && j - i >= 2 && j - i <= m - 2) touch = true;
      const double cx = q.dy[i] * q.dz[j] - q.dz[i] * q.dy[j];
      const double cy = q.dz[i] * q.dx[j] - q.dx[i] * q.dz[j];
      const double cz = q.dx[i] * q.dy[j] - q.dy[i] * q.dx[j];
      acc += (cx * ddx + cy * ddy + cz * ddz) / (d2 * std::sqrt(d2));
    }
    row[i] = acc;
  }
  if (touch) throw Error(ErrorCode::SelfIntersection, "chord below self-distance floor");
  double sum = 0.0;
  for (int i = 0; i < m; ++i) sum += row[i];
  const double h = cs.h();
  return 2.0 * sum * h * h / (4.0 * std::numbers::pi);
}

/// Writhe via the unit-chord form: with C = (r(t2) - r(t1))/|..| the integrand
/// (dC/dt1 x dC/dt2) . C is evaluated through the projected derivative
/// vectors. Independent arithmetic route used as a cross-check oracle.
inline double writhe_chordform_on_grid(const CurveSamples& cs) {
  const int m = cs.m;
  const detail::Soa q(cs);
  std::vector<double> row(m, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int j = i + 1; j < m; ++j) {
      const double ddx = q.x[j] - q.x[i], ddy = q.y[j] - q.y[i], ddz = q.z[j] - q.z[i];
      const double d = std::sqrt(ddx * ddx + ddy * ddy + ddz * ddz);
      const double cxn = ddx / d, cyn = ddy / d, czn = ddz / d;
      // dC/dt1 = -(I - C C^T) r'(t1)/d,  dC/dt2 = +(I - C C^T) r'(t2)/d
      const double pa = q.dx[i] * cxn + q.dy[i] * cyn + q.dz[i] * czn;
      const double ax = -(q.dx[i] - pa * cxn) / d;
      const double ay = -(q.dy[i] - pa * cyn) / d;
      const double az = -(q.dz[i] - pa * czn) / d;
      const double pb = q.dx[j] * cxn + q.dy[j] * cyn + q.dz[j] * czn;
      const double bx = (q.dx[j] - pb * cxn) / d;
      const double by = (q.dy[j] - pb * cyn) / d;
      const double bz = (q.dz[j] - pb * czn) / d;
      acc += (ay * bz - az * by) * cxn + (az * bx - ax * bz) * cyn + (ax * by - ay * bx) * czn;
    }
    row[i] = acc;
  }
  double sum = 0.0;
  for (int i = 0; i < m; ++i) sum += row[i];
  const double h = cs.h();
  return 2.0 * sum * h * h / (4.0 * std::numbers::pi);
}

/// Gauss linking integral of two disjoint closed curves on their grids.
inline double gauss_linking_on_grid(const CurveSamples& a, const CurveSamples& b) {
  const int ma = a.m, mb = b.m;
  const detail::Soa qa(a), qb(b);
  const double floor = 1e-9 * std::max(a.length, b.length);
  const double floor2 = floor * floor;
  std::vector<double> row(ma, 0.0);
  bool touch = false;
#pragma omp parallel for schedule(static) reduction(|| : touch)
  for (int i = 0; i < ma; ++i) {
    double acc = 0.0;
    for (int j = 0; j < mb; ++j) {
      const double ddx = qa.x[i] - qb.x[j], ddy = qa.y[i] - qb.y[j], ddz = qa.z[i] - qb.z[j];
      const double d2 = ddx * ddx + ddy * ddy + ddz * ddz;
      if (d2 < floor2) touch = true;
      const double cx = qa.dy[i] * qb.dz[j] - qa.dz[i] * qb.dy[j];
      const double cy = qa.dz[i] * qb.dx[j] - qa.dx[i] * qb.dz[j];
      const double cz = qa.dx[i] * qb.dy[j] - qa.dy[i] * qb.dx[j];
      acc += (cx * ddx + cy * ddy + cz * ddz) / (d2 * std::sqrt(d2));
    }
    row[i] = acc;
  }
  if (touch) throw Error(ErrorCode::CurvesTouch, "curves closer than the distance floor");
  double sum = 0.0;
  for (int i = 0; i < ma; ++i) sum += row[i];
  return sum * (a.period() / ma) * (b.period() / mb) / (4.0 * std::numbers::pi);
}

inline double writhe(const SamplesPtr& samples, const ConvergencePolicy& pol = {}) {
  auto c = detail::converge_ladder(
      [&](int m) {
        return writhe_on_grid(m == samples->m ? *samples : *sample_curve(samples->spec, m));
      },
      samples->m, pol);
  if (!c.converged)
    throw Error(ErrorCode::NotConverged, "writhe delta " + std::to_string(c.delta) + " at cap");
  return c.value;
}

inline double writhe_chordform(const SamplesPtr& samples, const ConvergencePolicy& pol = {}) {
  auto c = detail::converge_ladder(
      [&](int m) {
        return writhe_chordform_on_grid(m == samples->m ? *samples
                                                        : *sample_curve(samples->spec, m));
      },
      samples->m, pol);
  if (!c.converged)
    throw Error(ErrorCode::NotConverged, "writhe delta " + std::to_string(c.delta) + " at cap");
  return c.value;
}

struct LinkingResult {
  double value = 0.0;
  long nearest = 0;
  double residual = 0.0;  // |value - nearest|
};

inline LinkingResult gauss_linking(const SamplesPtr& a, const SamplesPtr& b,
                                   const ConvergencePolicy& pol = {}) {
  auto c = detail::converge_ladder(
      [&](int m) {
        const auto sa = (m == a->m) ? a : sample_curve(a->spec, m);
        const auto sb = (m == b->m) ? b : sample_curve(b->spec, m);
        return gauss_linking_on_grid(*sa, *sb);
      },
      std::max(a->m, b->m), pol);
  if (!c.converged)
    throw Error(ErrorCode::NotConverged, "linking delta " + std::to_string(c.delta) + " at cap");
  LinkingResult out;
  out.value = c.value;
  out.nearest = std::lround(c.value);
  out.residual = std::abs(c.value - double(out.nearest));
  return out;
}

/// Ribbon edge r + eps*U. The offset is re-represented as a trigonometric
/// interpolant so it carries analytic derivatives; the frame must close or
/// the edge would not be a closed curve.
struct RibbonEdges {
  SamplesPtr base, offset;
  double epsilon = 0.0;
};

namespace detail {

// Build samples of a trig-series curve directly in the spectral domain
// (O(m log m)), attaching the analytic spec for later resampling.
inline SamplesPtr samples_from_fourier(const FourierCurve& fc, int m) {
  CurveSpec spec = fourier_curve(fc);
  const std::size_t modes = std::max(fc.cos_c[0].size(), fc.sin_c[0].size());
  if (static_cast<std::size_t>(m) / 2 + 1 < modes) return sample_curve(spec, m);

  auto out = std::make_shared<CurveSamples>();
  out->spec = spec;
  out->m = m;
  const double P = fc.period;
  const double h = P / m;
  out->t.resize(m); out->v.resize(m); out->s.resize(m);
  out->kappa.resize(m); out->tau.resize(m);
  out->r.resize(m); out->r1.resize(m); out->r2.resize(m); out->r3.resize(m); out->T.resize(m);

  const double w0 = 2.0 * std::numbers::pi / P;
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<cplx> base(m, cplx(0.0));
    for (std::size_t j = 0; j < modes && j <= std::size_t(m) / 2; ++j) {
      const double a = j < fc.cos_c[axis].size() ? fc.cos_c[axis][j] : 0.0;
      const double b = j < fc.sin_c[axis].size() ? fc.sin_c[axis][j] : 0.0;
      if (j == 0) {
        base[0] += cplx(a) * double(m);
      } else if (2 * j == std::size_t(m)) {
        base[j] += cplx(a) * double(m);
      } else {
        base[j] += cplx(0.5 * a, -0.5 * b) * double(m);
        base[m - j] += cplx(0.5 * a, 0.5 * b) * double(m);
      }
    }
    for (int order = 0; order <= 3; ++order) {
      std::vector<cplx> spec_ord(m);
      for (int k = 0; k < m; ++k) {
        const long j = dft_wavenumber(k, m);
        cplx fac = (order == 0) ? cplx(1.0) : std::pow(cplx(0.0, w0 * double(j)), order);
        if (m % 2 == 0 && k == m / 2 && order % 2 == 1) fac = 0.0;
        spec_ord[k] = base[k] * fac;
      }
      auto vals = fft(std::move(spec_ord), true);
      auto& target = (order == 0) ? out->r : (order == 1) ? out->r1 : (order == 2) ? out->r2
                                                                                   : out->r3;
      for (int k = 0; k < m; ++k) target[k][axis] = vals[k].real();
    }
  }
  for (int k = 0; k < m; ++k) {
    out->t[k] = k * h;
    const double vk = out->r1[k].norm();
    if (vk <= kRegularityFloor)
      throw Error(ErrorCode::NonRegular, "offset curve loses regularity");
    out->v[k] = vk;
    out->T[k] = out->r1[k] / vk;
    const Vec3 cr = out->r1[k].cross(out->r2[k]);
    const double crn = cr.norm();
    out->kappa[k] = crn / (vk * vk * vk);
    out->tau[k] = (out->kappa[k] < kInflexionKappaFloor) ? 0.0 : cr.dot(out->r3[k]) / (crn * crn);
  }
  double vsum = 0.0;
  for (int k = 0; k < m; ++k) vsum += out->v[k];
  out->length = vsum * h;
  out->s[0] = 0.0;
  for (int k = 1; k < m; ++k) out->s[k] = out->s[k - 1] + 0.5 * h * (out->v[k - 1] + out->v[k]);
  return out;
}

}  // namespace detail

inline RibbonEdges ribbon_edge(const SamplesPtr& samples, const FrameField& frame,
                               double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (!frame.closes(1e-6))
    throw Error(ErrorCode::FrameNotClosed, "ribbon edge needs a closing frame (closure angle " +
                                               std::to_string(frame.closure_angle) + ")");
  const auto& cs = *samples;
  const double sd = min_self_distance(cs);
  if (epsilon >= 0.5 * sd)
    throw Error(ErrorCode::EpsilonTooLarge, "epsilon " + std::to_string(epsilon) +
                                                " vs half self-distance " + std::to_string(0.5 * sd));
  std::vector<Vec3> pts(cs.m);
  for (int k = 0; k < cs.m; ++k) pts[k] = cs.r[k] + epsilon * frame.U[k];
  FourierCurve fc = fourier_interpolate(pts, cs.period(), cs.spec.label + "+eps*U");
  RibbonEdges out;
  out.base = samples;
  out.offset = detail::samples_from_fourier(fc, cs.m);
  out.epsilon = epsilon;
  return out;
}

/// Everything about one curve + frame + ribbon in a single report.
struct QuantityDiag {
  double value = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  int m_used = 0;
  bool converged = false;
};

struct GeometrySummary {
  std::string frame_kind;
  double epsilon = 0.0;
  QuantityDiag tw, phi_T, wr, lk;  // lk.value is the raw Gauss integral
  long lk_integer = 0;
  double lk_residual = 0.0;
  double tw_g = 0.0, phi_g = 0.0, lk_g = 0.0;
  double cwf_residual = 0.0;    // Lk - Tw - Wr (raw Gauss Lk)
  double cwf_g_residual = 0.0;  // Lk_g - Tw_g - Wr
  double min_overlap = 0.0;
  bool phase_bridged = false;
  bool converged = false;
};

/// Assemble twist, total phase, writhe, ribbon linking and the two
/// frame-independent combinations, with grid-doubling on every quantity.
inline GeometrySummary summarize(const SamplesPtr& samples, const FrameField& frame,
                                 double epsilon, const ConvergencePolicy& pol = {}) {
  GeometrySummary out;
  out.frame_kind = frame.kind == FrameKind::frenet
                       ? "frenet"
                       : (frame.kind == FrameKind::parallel ? "parallel" : "custom");
  out.epsilon = epsilon;

  struct Level {
    double tw, phi, wr, lk, minov;
    bool bridged;
  };
  auto compute_level = [&](int m) -> Level {
    const SamplesPtr s = (m == samples->m) ? samples : sample_curve(samples->spec, m);
    FrameField f = (m == samples->m) ? frame : frame.rebuild(m);
    const PhaseResult ph = total_phase(f);
    const RibbonEdges rb = ribbon_edge(s, f, epsilon);
    return {twist(f), ph.total_phase, writhe_on_grid(*s),
            gauss_linking_on_grid(*s, *rb.offset), ph.min_overlap, ph.bridged};
  };

  if (!frame.rebuild)
    throw Error(ErrorCode::InvalidArgument, "summary needs a rebuildable frame for grid doubling");
  Level prev = compute_level(samples->m);
  int m = samples->m;
  while (2 * m <= pol.m_max) {
    const Level cur = compute_level(2 * m);
    auto upd = [&](QuantityDiag& q, double pv, double cv) {
      q.value = cv;
      q.delta = cv - pv;
      q.m_used = 2 * m;
      q.converged = std::abs(q.delta) < pol.tol;
    };
    upd(out.tw, prev.tw, cur.tw);
    upd(out.phi_T, prev.phi, cur.phi);
    upd(out.wr, prev.wr, cur.wr);
    upd(out.lk, prev.lk, cur.lk);
    out.min_overlap = cur.minov;
    out.phase_bridged = cur.bridged;
    prev = cur;
    m *= 2;
    if (out.tw.converged && out.phi_T.converged && out.wr.converged && out.lk.converged) break;
  }
  out.converged = out.tw.converged && out.phi_T.converged && out.wr.converged && out.lk.converged;
  out.lk_integer = std::lround(out.lk.value);
  out.lk_residual = std::abs(out.lk.value - double(out.lk_integer));
  out.tw_g = out.tw.value - out.phi_T.value;
  out.phi_g = -out.tw_g;
  out.lk_g = out.lk.value - out.phi_T.value;
  out.cwf_residual = out.lk.value - out.tw.value - out.wr.value;
  out.cwf_g_residual = out.lk_g - out.tw_g - out.wr.value;
  return out;
}

}  // namespace curvegeom
