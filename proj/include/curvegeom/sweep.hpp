#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "curvegeom/global_geometry.hpp"
#include "curvegeom/strip_family.hpp"

namespace curvegeom {

struct SweepConfig {
  int n = 1;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  int steps = 40;
  double exclude_radius = 0.005;  // relative half-width of the skipped band at alpha_c
  double tol = 1e-6;
  int m_initial = 1024;
  int m_max = 1 << 14;
};

/// Default width range a = (alpha - alpha_c)/alpha_c in [-0.9, 0.8].
inline SweepConfig default_sweep_config(int n) {
  SweepConfig cfg;
  cfg.n = n;
  const double ac = strip_critical_alpha(n);
  cfg.alpha_min = 0.1 * ac;
  cfg.alpha_max = 1.8 * ac;
  return cfg;
}

struct SweepRow {
  int n = 0;
  double alpha = 0.0;
  double a = 0.0;  // (alpha - alpha_c)/alpha_c
  double Wr = std::numeric_limits<double>::quiet_NaN();
  double Tw_g = std::numeric_limits<double>::quiet_NaN();
  double phi_g = std::numeric_limits<double>::quiet_NaN();
  double int_tau = std::numeric_limits<double>::quiet_NaN();   // (1/2pi) closed integral of tau ds
  double phi_T = std::numeric_limits<double>::quiet_NaN();     // Frenet-frame total phase
  double Lk_g = std::numeric_limits<double>::quiet_NaN();
  double cwf_residual = std::numeric_limits<double>::quiet_NaN();
  int m_used = 0;
  bool converged = false;
  std::string error;
};

namespace detail {

inline SweepRow sweep_row(const SweepConfig& cfg, double alpha) {
  SweepRow row;
  row.n = cfg.n;
  row.alpha = alpha;
  const double ac = strip_critical_alpha(cfg.n);
  row.a = (alpha - ac) / ac;

  const CurveSpec spec = strip_boundary({cfg.n, alpha, 1.0});
  const ConvergencePolicy pol{cfg.tol, cfg.m_max};
  const SamplesPtr s0 = sample_curve(spec, cfg.m_initial);
  const double eps = 1e-3 * s0->length;

  auto wr = converge_ladder(
      [&](int m) { return writhe_on_grid(m == s0->m ? *s0 : *sample_curve(spec, m)); },
      cfg.m_initial, pol);
  row.Wr = wr.value;

  auto it = converge_ladder(
      [&](int m) { return frenet_twist(m == s0->m ? *s0 : *sample_curve(spec, m)); },
      cfg.m_initial, pol);
  row.int_tau = it.value;

  auto lk = converge_ladder(
      [&](int m) {
        const SamplesPtr s = (m == s0->m) ? s0 : sample_curve(spec, m);
        const RibbonEdges rb = ribbon_edge(s, frenet_frame(s), eps);
        return gauss_linking_on_grid(*s, *rb.offset);
      },
      cfg.m_initial, pol);

  const PhaseResult ph = total_phase(frenet_frame(s0));
  row.phi_T = ph.total_phase;
  row.Lk_g = lk.value - row.phi_T;
  row.cwf_residual = lk.value - row.int_tau - row.Wr;

  // Frame-independent twist via the parallel route, cross-checked against
  // the Frenet route.
  const double twg_par = -total_phase(parallel_transport_frame(s0)).total_phase;
  const double twg_fs = row.int_tau - row.phi_T;
  row.Tw_g = twg_par;
  row.phi_g = -row.Tw_g;

  row.m_used = std::max({wr.m_used, it.m_used, lk.m_used});
  row.converged = wr.converged && it.converged && lk.converged && !ph.bridged &&
                  std::abs(twg_par - twg_fs) < 1e-4;
  return row;
}

}  // namespace detail

/// One row per width, exclusion band around alpha_c applied. Row failures are
/// recorded in the row, never aborting the sweep; order is by alpha.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  if (!(cfg.alpha_min < cfg.alpha_max) || cfg.steps < 2)
    throw Error(ErrorCode::InvalidArgument, "need alpha_min < alpha_max and steps >= 2");
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  const double ac = strip_critical_alpha(cfg.n);
  std::vector<SweepRow> rows;
  for (int i = 0; i < cfg.steps; ++i) {
    const double alpha =
        cfg.alpha_min + (cfg.alpha_max - cfg.alpha_min) * double(i) / double(cfg.steps - 1);
    if (std::abs(alpha - ac) < cfg.exclude_radius * ac) continue;
    try {
      rows.push_back(detail::sweep_row(cfg, alpha));
    } catch (const Error& e) {
      SweepRow row;
      row.n = cfg.n;
      row.alpha = alpha;
      row.a = (alpha - ac) / ac;
      row.converged = false;
      row.error = e.what();
      rows.push_back(row);
    }
  }
  return rows;
}

enum class SweepQuantity { Wr, Tw_g, Lk_g, int_tau, phi_T };

inline double sweep_value(const SweepRow& r, SweepQuantity q) {
  switch (q) {
    case SweepQuantity::Wr: return r.Wr;
    case SweepQuantity::Tw_g: return r.Tw_g;
    case SweepQuantity::Lk_g: return r.Lk_g;
    case SweepQuantity::int_tau: return r.int_tau;
    case SweepQuantity::phi_T: return r.phi_T;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

struct ContinuityReport {
  SweepQuantity quantity;
  double left_limit = 0.0;   // one-sided linear extrapolation to alpha_c
  double right_limit = 0.0;
  double jump = 0.0;
  int n_jumps = 0;  // inflexion count on the analyzed curve
  enum class Class { continuous, unit_jump, other } classification = Class::other;
};

/// Estimate the jump of a quantity across alpha_c by straight-line
/// extrapolation from the nearest converged rows on each side.
inline ContinuityReport continuity_report(std::span<const SweepRow> rows, SweepQuantity q,
                                          double jump_tol = 0.05) {
  ContinuityReport rep;
  rep.quantity = q;
  auto fit_side = [&](bool left) {
    std::vector<std::pair<double, double>> pts;  // (a, value)
    for (const auto& r : rows) {
      if (!r.converged) continue;
      if ((left && r.a < 0.0) || (!left && r.a > 0.0)) pts.push_back({r.a, sweep_value(r, q)});
    }
    std::sort(pts.begin(), pts.end(), [](auto& x, auto& y) {
      return std::abs(x.first) < std::abs(y.first);
    });
    if (pts.size() < 2) throw Error(ErrorCode::InsufficientRows, "need >= 2 converged rows per side");
    const std::size_t k = std::min<std::size_t>(4, pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
      sx += pts[i].first;
      sy += pts[i].second;
      sxx += pts[i].first * pts[i].first;
      sxy += pts[i].first * pts[i].second;
    }
    const double denom = k * sxx - sx * sx;
    const double slope = (std::abs(denom) > 1e-30) ? (k * sxy - sx * sy) / denom : 0.0;
    const double icept = (sy - slope * sx) / double(k);
    return icept;  // value extrapolated to a = 0
  };
  rep.left_limit = fit_side(true);
  rep.right_limit = fit_side(false);
  rep.jump = rep.right_limit - rep.left_limit;
  const int n = rows.empty() ? 1 : rows.front().n;
  rep.n_jumps = (n % 2 == 1) ? n : n / 2;
  if (std::abs(rep.jump) < jump_tol)
    rep.classification = ContinuityReport::Class::continuous;
  else if (std::abs(std::abs(rep.jump) - rep.n_jumps) < jump_tol)
    rep.classification = ContinuityReport::Class::unit_jump;
  return rep;
}

struct SweepFeatures {
  struct Extremum {
    double a = 0.0, alpha = 0.0, value = 0.0;
  };
  std::optional<Extremum> wr_max, wr_min, twg_max, twg_min;
  long lkg_plateau = 0;
  double lkg_max_deviation = 0.0;
  int converged_rows = 0;
};

/// Interior extrema of Wr and Tw_g over the converged rows, plus the integer
/// plateau of Lk_g with its worst deviation.
inline SweepFeatures feature_extract(std::span<const SweepRow> rows) {
  std::vector<const SweepRow*> ok;
  for (const auto& r : rows)
    if (r.converged) ok.push_back(&r);
  if (ok.size() < 10) throw Error(ErrorCode::InsufficientRows, "need >= 10 converged rows");
  SweepFeatures out;
  out.converged_rows = int(ok.size());
  auto scan = [&](auto get, std::optional<SweepFeatures::Extremum>& mx,
                  std::optional<SweepFeatures::Extremum>& mn) {
    for (std::size_t i = 1; i + 1 < ok.size(); ++i) {
      const double v = get(*ok[i]), vl = get(*ok[i - 1]), vr = get(*ok[i + 1]);
      if (v > vl && v > vr && (!mx || v > mx->value))
        mx = SweepFeatures::Extremum{ok[i]->a, ok[i]->alpha, v};
      if (v < vl && v < vr && (!mn || v < mn->value))
        mn = SweepFeatures::Extremum{ok[i]->a, ok[i]->alpha, v};
    }
  };
  scan([](const SweepRow& r) { return r.Wr; }, out.wr_max, out.wr_min);
  scan([](const SweepRow& r) { return r.Tw_g; }, out.twg_max, out.twg_min);
  std::vector<double> lkg;
  for (auto* r : ok) lkg.push_back(r->Lk_g);
  std::sort(lkg.begin(), lkg.end());
  out.lkg_plateau = std::lround(lkg[lkg.size() / 2]);
  for (double v : lkg)
    out.lkg_max_deviation = std::max(out.lkg_max_deviation, std::abs(v - double(out.lkg_plateau)));
  return out;
}

}  // namespace curvegeom
