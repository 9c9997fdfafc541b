#pragma once

// Cutoff kernel h_1(r) by composite Simpson over the momentum shell, using the
// standard library Bessel functions; no tables, no Gauss rules.

#include <cmath>
#include <numbers>

namespace oracle {

inline double ramp(double p) {
  const double t = p - 1.0;
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

inline double unit_kernel(double r, int dim, int intervals = 40000) {
  const double h = 2.0 / intervals;
  double sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double p = h * i;
    const double g = 1.0 - ramp(p);
    double v;
    if (dim == 3) {
      const double x = p * r;
      v = g * p * p * (x == 0.0 ? 1.0 : std::sin(x) / x);
    } else {
      v = g * p * std::cyl_bessel_j(0.0, p * r);
    }
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * v;
  }
  sum *= h / 3.0;
  if (dim == 3) sum *= 4.0 * std::numbers::pi * std::pow(2.0 * std::numbers::pi, -1.5);
  return sum;
}

}  // namespace oracle
