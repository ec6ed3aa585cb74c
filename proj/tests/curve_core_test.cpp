#include <gtest/gtest.h>

#include <numbers>

#include "support.hpp"

using namespace curvegeom;
namespace t = cgtest;

constexpr double kPi = std::numbers::pi;

TEST(SampleCurve, CircleLength) {
  auto s = sample_curve(t::unit_circle(), 64);
  EXPECT_NEAR(s->length, 2.0 * kPi, 1e-10);
  EXPECT_EQ(s->m, 64);
  EXPECT_DOUBLE_EQ(s->s[0], 0.0);
  for (int k = 1; k < s->m; ++k) EXPECT_GT(s->s[k], s->s[k - 1]);
}

TEST(SampleCurve, StripBoundaryClosesOverDoublePeriod) {
  auto spec = strip_boundary({1, 0.6, 1.0});
  EXPECT_NEAR(spec.period, 4.0 * kPi, 0.0);
  auto s = sample_curve(spec, 512);
  EXPECT_EQ(s->m, 512);
  EXPECT_LT((spec.eval(0.0) - spec.eval(spec.period)).norm(), 1e-12);
}

TEST(SampleCurve, OddGridRejected) {
  EXPECT_THROW(
      {
        try {
          sample_curve(t::unit_circle(), 15);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
          throw;
        }
      },
      Error);
}

TEST(SampleCurve, OpenCurveRejected) {
  CurveSpec broken = t::unit_circle();
  broken.eval = [](double t_) { return Vec3(std::cos(t_), std::sin(t_), 0.1 * t_); };
  broken.deriv1 = [](double t_) { return Vec3(-std::sin(t_), std::cos(t_), 0.1); };
  EXPECT_THROW(sample_curve(broken, 64), Error);
}

TEST(SampleCurve, UnitTangents) {
  auto s = sample_curve(fourier_curve(t::random_fourier_curve(11)), 256);
  for (int k = 0; k < s->m; ++k) {
    EXPECT_LT(std::abs(s->T[k].norm() - 1.0), 1e-12);
    EXPECT_GT(s->v[k], 0.0);
    EXPECT_GE(s->kappa[k], 0.0);
  }
}

TEST(Curvature, CircleAndHelix) {
  auto circ = t::unit_circle();
  EXPECT_NEAR(curvature_at(circ.deriv1(0.3), circ.deriv2(0.3)), 1.0, 1e-12);
  // helix (cos t, sin t, t): kappa = tau = 1/2
  auto h1 = [](double u) { return Vec3(-std::sin(u), std::cos(u), 1.0); };
  auto h2 = [](double u) { return Vec3(-std::cos(u), -std::sin(u), 0.0); };
  auto h3 = [](double u) { return Vec3(std::sin(u), -std::cos(u), 0.0); };
  EXPECT_NEAR(curvature_at(h1(0.7), h2(0.7)), 0.5, 1e-12);
  EXPECT_NEAR(torsion_at(h1(0.7), h2(0.7), h3(0.7)), 0.5, 1e-12);
}

TEST(Curvature, VanishesAtCriticalWidth) {
  auto spec = strip_boundary({1, strip_critical_alpha(1), 1.0});
  auto s = sample_curve(spec, 512);  // 2*pi falls on a grid node
  EXPECT_NEAR(s->kappa[s->m / 2], 0.0, 1e-12);
}

TEST(Torsion, PlanarCurveHasNone) {
  auto circ = t::unit_circle();
  EXPECT_NEAR(torsion_at(circ.deriv1(1.1), circ.deriv2(1.1), circ.deriv3(1.1)), 0.0, 1e-12);
}

TEST(Torsion, InflexionRejected) {
  // straight-line data: r' x r'' = 0
  EXPECT_THROW(torsion_at(Vec3(1, 0, 0), Vec3(0, 0, 0), Vec3(0, 0, 0)), Error);
}

TEST(Torsion, NearCriticalSpikeMatchesExpansion) {
  // tau at the near-inflexion point against the leading-order form; the
  // residual is a few percent at this distance from critical.
  auto spec = strip_boundary({1, 0.81, 1.0});
  const double tc = 2.0 * kPi;
  const double tau = torsion_at(spec.deriv1(tc), spec.deriv2(tc), spec.deriv3(tc));
  const auto pred = asymptotic_kappa_tau(0.81, tc);
  EXPECT_GT(tau, 0.0);
  EXPECT_NEAR(tau, pred.tau_pred, 0.08 * std::abs(pred.tau_pred));
}

TEST(IntegratePeriodic, ConstantAndArcLength) {
  auto s = sample_curve(t::unit_circle(), 128);
  std::vector<double> ones(s->m, 1.0);
  EXPECT_NEAR(integrate_periodic(ones, *s, Weight::dt), 2.0 * kPi, 1e-12);
  EXPECT_NEAR(integrate_periodic(ones, *s, Weight::ds), 2.0 * kPi, 1e-10);
  std::vector<double> wrong(s->m - 1, 1.0);
  EXPECT_THROW(integrate_periodic(wrong, *s, Weight::dt), Error);
}

TEST(IntegratePeriodic, TorsionIntegralStableUnderDoubling) {
  auto spec = strip_boundary({1, 0.6, 1.0});
  auto coarse = sample_curve(spec, 512);
  auto fine = sample_curve(spec, 1024);
  EXPECT_NEAR(integrate_periodic(coarse->tau, *coarse, Weight::ds),
              integrate_periodic(fine->tau, *fine, Weight::ds), 1e-8);
}

TEST(IntegratePeriodic, SpectralConvergenceOnSmoothIntegrand) {
  // error should drop by more than 10x per doubling once the integrand
  // is resolved
  auto spec = fourier_curve(t::wavy_ring());
  auto eval = [&spec](int m) {
    auto s = sample_curve(spec, m);
    std::vector<double> f(s->m);
    for (int k = 0; k < s->m; ++k) f[k] = std::exp(std::sin(s->t[k]) + 0.3 * s->v[k]);
    return integrate_periodic(f, *s, Weight::dt);
  };
  const double ref = eval(4096);
  double prev_err = std::abs(eval(16) - ref);
  bool resolved = false;
  for (int m = 32; m <= 512; m *= 2) {
    const double err = std::abs(eval(m) - ref);
    if (resolved) EXPECT_TRUE(err < prev_err / 10.0 || err < 1e-13);
    if (err < 1e-3) resolved = true;
    prev_err = err;
  }
  EXPECT_TRUE(resolved);
}

TEST(DetectInflexions, CircleIsClean) {
  auto s = sample_curve(t::unit_circle(), 256);
  EXPECT_TRUE(detect_inflexions(*s, 1e-3).points.empty());
}

TEST(DetectInflexions, CriticalMobiusBoundaryHasOne) {
  auto s = sample_curve(strip_boundary({1, strip_critical_alpha(1), 1.0}), 4096);
  auto rep = detect_inflexions(*s, 1e-3);
  ASSERT_EQ(rep.points.size(), 1u);
  EXPECT_NEAR(rep.points[0].t_star, 2.0 * kPi, 1e-3);
  EXPECT_LT(rep.points[0].kappa_min, 1e-6);
}

TEST(DetectInflexions, ThreeHalfTwistsGiveThreePoints) {
  auto s = sample_curve(strip_boundary({3, strip_critical_alpha(3), 1.0}), 8192);
  auto rep = detect_inflexions(*s, 1e-3);
  ASSERT_EQ(rep.points.size(), 3u);
  // zeros sit where the twist phase passes the inner rim
  EXPECT_NEAR(rep.points[0].t_star, 2.0 * kPi / 3.0, 1e-3);
  EXPECT_NEAR(rep.points[1].t_star, 2.0 * kPi, 1e-3);
  EXPECT_NEAR(rep.points[2].t_star, 10.0 * kPi / 3.0, 1e-3);
}

// Oracle: Frenet data from tangent samples alone (finite differences of the
// unit tangent against arc length), independent of the closed-form r'', r'''.
namespace {

struct FdFrenet {
  double kappa, tau;
};

FdFrenet fd_frenet(const CurveSpec& spec, double t0, double h) {
  auto T = [&spec](double u) {
    const Vec3 d = spec.deriv1(u);
    return Vec3(d / d.norm());
  };
  auto fd1 = [&](auto f, double u) -> Vec3 {
    return ((f(u - 2 * h) - f(u + 2 * h)) + 8.0 * (f(u + h) - f(u - h))) / (12.0 * h);
  };
  const double v = spec.deriv1(t0).norm();
  const Vec3 Ts = fd1(T, t0) / v;  // dT/ds
  auto Ts_of = [&](double u) {
    const double vu = spec.deriv1(u).norm();
    return Vec3(fd1(T, u) / vu);
  };
  const Vec3 Tss = fd1(Ts_of, t0) / v;
  FdFrenet out;
  out.kappa = Ts.norm();
  out.tau = T(t0).dot(Ts.cross(Tss)) / Ts.squaredNorm();
  return out;
}

}  // namespace

TEST(ChainRule, ArcLengthFormsAgreeWithParameterForms) {
  auto spec = fourier_curve(t::random_fourier_curve(42));
  auto s = sample_curve(spec, 2048);
  for (int k = 100; k < s->m; k += 257) {
    const auto fd = fd_frenet(spec, s->t[k], 1e-3);
    EXPECT_NEAR(fd.kappa, s->kappa[k], 1e-6 * std::max(1.0, s->kappa[k]));
    EXPECT_NEAR(fd.tau, s->tau[k], 1e-6 * std::max(1.0, std::abs(s->tau[k])));
  }
}

TEST(Reparametrization, GeometryIsParameterFree) {
  auto base = fourier_curve(t::random_fourier_curve(7));
  auto repar = t::reparametrized(base);
  auto s0 = sample_curve(base, 1024);
  auto s1 = sample_curve(repar, 1024);
  EXPECT_NEAR(s0->length, s1->length, 1e-8);
  // kappa, tau compared at matched geometric points: sigma_k = t_k + 0.3 sin t_k
  for (int k = 0; k < 1024; k += 97) {
    const double t0 = s0->t[k];
    const double sigma = t0 + 0.3 * std::sin(t0);
    const double kap = curvature_at(repar.deriv1(sigma), repar.deriv2(sigma));
    const double tau = torsion_at(repar.deriv1(sigma), repar.deriv2(sigma), repar.deriv3(sigma));
    EXPECT_NEAR(kap, s0->kappa[k], 1e-8 * std::max(1.0, s0->kappa[k]));
    EXPECT_NEAR(tau, s0->tau[k], 1e-8 * std::max(1.0, std::abs(s0->tau[k])));
  }
}

TEST(Regularity, ZeroSpeedRejected) {
  CurveSpec degenerate = t::unit_circle();
  degenerate.deriv1 = [](double) { return Vec3(1e-12, 0.0, 0.0); };
  EXPECT_THROW(
      {
        try {
          sample_curve(degenerate, 64);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::NonRegular);
          throw;
        }
      },
      Error);
}
