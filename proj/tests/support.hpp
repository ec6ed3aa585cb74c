#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "curvegeom/curvegeom.hpp"

namespace cgtest {

using curvegeom::CurveSpec;
using curvegeom::FourierCurve;
using curvegeom::Vec3;

inline CurveSpec unit_circle() {
  CurveSpec s;
  s.period = 2.0 * std::numbers::pi;
  s.label = "circle";
  s.eval = [](double t) { return Vec3(std::cos(t), std::sin(t), 0.0); };
  s.deriv1 = [](double t) { return Vec3(-std::sin(t), std::cos(t), 0.0); };
  s.deriv2 = [](double t) { return Vec3(-std::cos(t), -std::sin(t), 0.0); };
  s.deriv3 = [](double t) { return Vec3(std::sin(t), -std::cos(t), 0.0); };
  return s;
}

// Closed-curve test stand-in for a helix: circle base plus a vertical wave.
inline FourierCurve wavy_ring(int waves = 3, double amp = 0.3) {
  FourierCurve fc;
  fc.label = "wavy_ring";
  fc.cos_c[0] = {0.0, 1.0};
  fc.sin_c[1] = {0.0, 1.0};
  fc.sin_c[2] = std::vector<double>(waves + 1, 0.0);
  fc.sin_c[2][waves] = amp;
  return fc;
}

// Seeded smooth closed curve: unit circle plus decaying random harmonics.
// Amplitudes are kept small enough that the curve stays regular and free of
// inflexions, so the Frenet frame exists everywhere.
inline FourierCurve random_fourier_curve(unsigned seed, int modes = 4, double amp = 0.12) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  FourierCurve fc;
  fc.label = "random_fourier_" + std::to_string(seed);
  for (int c = 0; c < 3; ++c) {
    fc.cos_c[c].assign(modes + 1, 0.0);
    fc.sin_c[c].assign(modes + 1, 0.0);
  }
  fc.cos_c[0][1] = 1.0;  // base circle
  fc.sin_c[1][1] = 1.0;
  for (int c = 0; c < 3; ++c)
    for (int j = 2; j <= modes; ++j) {
      const double decay = amp / double(j * j);
      fc.cos_c[c][j] = decay * gauss(rng);
      fc.sin_c[c][j] = decay * gauss(rng);
    }
  // first-harmonic z so the curve is genuinely non-planar
  fc.sin_c[2][1] = 0.2 + 0.05 * gauss(rng);
  return fc;
}

// Same geometric curve under the parameter change sigma = t + 0.3 sin t.
inline CurveSpec reparametrized(const CurveSpec& base) {
  const double P = base.period;
  auto t_of_sigma = [P](double sigma) {
    double t = sigma;
    for (int it = 0; it < 60; ++it) {
      const double f = t + 0.3 * std::sin(t) - sigma;
      const double fp = 1.0 + 0.3 * std::cos(t);
      const double step = f / fp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    return t;
  };
  CurveSpec s;
  s.period = P;
  s.label = base.label + "_reparam";
  s.eval = [base, t_of_sigma](double sigma) { return base.eval(t_of_sigma(sigma)); };
  s.deriv1 = [base, t_of_sigma](double sigma) {
    const double t = t_of_sigma(sigma);
    const double sp = 1.0 + 0.3 * std::cos(t);
    return Vec3(base.deriv1(t) / sp);
  };
  s.deriv2 = [base, t_of_sigma](double sigma) {
    const double t = t_of_sigma(sigma);
    const double sp = 1.0 + 0.3 * std::cos(t), spp = -0.3 * std::sin(t);
    const double t1 = 1.0 / sp, t2 = -spp / (sp * sp * sp);
    return Vec3(base.deriv2(t) * t1 * t1 + base.deriv1(t) * t2);
  };
  s.deriv3 = [base, t_of_sigma](double sigma) {
    const double t = t_of_sigma(sigma);
    const double sp = 1.0 + 0.3 * std::cos(t), spp = -0.3 * std::sin(t),
                 sppp = -0.3 * std::cos(t);
    const double t1 = 1.0 / sp, t2 = -spp / (sp * sp * sp);
    const double t3 = (3.0 * spp * spp - sp * sppp) / std::pow(sp, 5);
    return Vec3(base.deriv3(t) * t1 * t1 * t1 + 3.0 * base.deriv2(t) * t1 * t2 +
                base.deriv1(t) * t3);
  };
  return s;
}

// Orientation-reversed traversal of the same curve.
inline CurveSpec reversed(const CurveSpec& base) {
  const double P = base.period;
  CurveSpec s;
  s.period = P;
  s.label = base.label + "_reversed";
  s.eval = [base, P](double t) { return base.eval(P - t); };
  s.deriv1 = [base, P](double t) { return Vec3(-base.deriv1(P - t)); };
  s.deriv2 = [base, P](double t) { return Vec3(base.deriv2(P - t)); };
  s.deriv3 = [base, P](double t) { return Vec3(-base.deriv3(P - t)); };
  return s;
}

}  // namespace cgtest
