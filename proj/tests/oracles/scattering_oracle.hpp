#pragma once

// Independent reference values for the scattering solver: closed forms and a
// fixed-step RK4 integrator with no adaptivity and no shared code.

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

namespace oracle {

// 3D square barrier: sinh(kappa r) inside matched to (r - a) at R0.
inline double barrier_a_3d(double v0, double R0) {
  const double k = std::sqrt(v0 / 2.0);
  // u = sinh(k r), u' = k cosh(k r); a = R0 - u/u'
  return R0 - std::sinh(k * R0) / (k * std::cosh(k * R0));
}

// 2D square barrier: I0(kappa r) inside matched to ln(r/a).
inline double barrier_log_a_2d(double v0, double R0) {
  const double k = std::sqrt(v0 / 2.0);
  const double i0 = boost::math::cyl_bessel_i(0, k * R0);
  const double i1 = boost::math::cyl_bessel_i(1, k * R0);
  return std::log(R0) - i0 / (k * R0 * i1);
}

// 3D hard core c with constant shoulder v0 up to R0.
inline double shoulder_a_3d(double c, double v0, double R0) {
  const double k = std::sqrt(v0 / 2.0);
  const double u = std::sinh(k * (R0 - c)), du = k * std::cosh(k * (R0 - c));
  return R0 - u / du;
}

// Fixed-step RK4 on [r0, R0] split at `cuts`; returns a (3D) or ln a (2D).
inline double rk4_scattering(const std::function<double(double)>& v, double core,
                             std::vector<double> cuts, int dim, int steps_per_cut = 20000) {
  double y0, y1;  // 3D: (u, u'); 2D: (phi, r phi')
  if (dim == 3 || core > 0.0) {
    y0 = 0.0;
    y1 = 1.0;
  } else {
    y0 = 1.0;
    y1 = 0.0;
  }
  auto f = [&](double r, double a0, double a1, double vv, double& d0, double& d1) {
    if (dim == 3) {
      d0 = a1;
      d1 = 0.5 * vv * a0;
    } else {
      d0 = r > 0 ? a1 / r : 0.0;
      d1 = 0.5 * vv * r * a0;
    }
  };
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c], hi = cuts[c + 1];
    const double h = (hi - lo) / steps_per_cut;
    auto vin = [&](double r) {
      const double eps = 1e-12 * (hi - lo);
      return v(std::min(std::max(r, lo + eps), hi - eps));
    };
    for (int i = 0; i < steps_per_cut; ++i) {
      const double r = lo + i * h;
      double k10, k11, k20, k21, k30, k31, k40, k41;
      f(r, y0, y1, vin(r), k10, k11);
      f(r + h / 2, y0 + h / 2 * k10, y1 + h / 2 * k11, vin(r + h / 2), k20, k21);
      f(r + h / 2, y0 + h / 2 * k20, y1 + h / 2 * k21, vin(r + h / 2), k30, k31);
      f(r + h, y0 + h * k30, y1 + h * k31, vin(r + h), k40, k41);
      y0 += h / 6 * (k10 + 2 * k20 + 2 * k30 + k40);
      y1 += h / 6 * (k11 + 2 * k21 + 2 * k31 + k41);
    }
  }
  const double R0 = cuts.back();
  if (dim == 3) return R0 - y0 / y1;
  return std::log(R0) - y0 / y1;
}

}  // namespace oracle
