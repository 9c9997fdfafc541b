#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace fermigas::quad {

/// Nodes and weights of a one-dimensional rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with `n` points on [-1, 1] (Newton iteration on P_n).
/// Results are cached per n.
const Rule& gauss_legendre(int n);

/// Gauss-Legendre rule with `n` points mapped onto [lo, hi].
Rule gauss_legendre(int n, double lo, double hi);

/// Composite Gauss-Legendre rule: each interval between consecutive
/// breakpoints is split into `panels` equal panels of `order` points.
Rule composite(std::span<const double> breakpoints, int panels, int order);

/// Chebyshev points of the first kind on [lo, hi].
std::vector<double> chebyshev_points(int n, double lo, double hi);

/// A point set with weights in d = 2 or 3 dimensions.
struct PointRule {
  int dimension = 3;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// Product rule on the ball |x| <= r_max around `center`: the radial rule
/// (already carrying panel splits) times Gauss-Legendre in cos(theta) and
/// the trapezoid rule in phi. In 2D the polar angle is dropped.
PointRule ball_rule(int dimension, const Rule& radial, int n_polar, int n_azimuth,
                    std::array<double, 3> center = {0.0, 0.0, 0.0});

/// C-infinity step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t).
double smooth_step(double t);

/// Derivative of smooth_step.
double smooth_step_derivative(double t);

/// Surface area of the unit sphere in d dimensions (d = 1, 2, 3).
double unit_sphere_area(int dimension);

}  // namespace fermigas::quad
