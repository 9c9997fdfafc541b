#include "fermigas/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fermigas::quad {

namespace {

Rule compute_gauss_legendre(int n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::mutex mutex;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

Rule gauss_legendre(int n, double lo, double hi) {
  const Rule& ref = gauss_legendre(n);
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * ref.nodes[i];
    rule.weights[i] = half * ref.weights[i];
  }
  return rule;
}

Rule composite(std::span<const double> breakpoints, int panels, int order) {
  Rule rule;
  const Rule& ref = gauss_legendre(order);
  for (std::size_t b = 0; b + 1 < breakpoints.size(); ++b) {
    const double lo = breakpoints[b], hi = breakpoints[b + 1];
    if (!(hi > lo)) continue;
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = lo + p * width;
      const double half = 0.5 * width, mid = a + half;
      for (int i = 0; i < order; ++i) {
        rule.nodes.push_back(mid + half * ref.nodes[i]);
        rule.weights.push_back(half * ref.weights[i]);
      }
    }
  }
  return rule;
}

std::vector<double> chebyshev_points(int n, double lo, double hi) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    const double t = std::cos(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * n));
    x[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
  }
  return x;
}

PointRule ball_rule(int dimension, const Rule& radial, int n_polar, int n_azimuth,
                    std::array<double, 3> center) {
  PointRule out;
  out.dimension = dimension;
  const double dphi = 2.0 * std::numbers::pi / n_azimuth;
  if (dimension == 2) {
    out.points.reserve(radial.size() * n_azimuth);
    for (std::size_t ir = 0; ir < radial.size(); ++ir) {
      const double r = radial.nodes[ir];
      for (int k = 0; k < n_azimuth; ++k) {
        const double phi = (k + 0.5) * dphi;
        out.points.push_back({center[0] + r * std::cos(phi), center[1] + r * std::sin(phi), 0.0});
        out.weights.push_back(radial.weights[ir] * r * dphi);
      }
    }
    return out;
  }
  if (dimension != 3) throw std::invalid_argument("ball_rule: dimension must be 2 or 3");
  const Rule& polar = gauss_legendre(n_polar);
  out.points.reserve(radial.size() * n_polar * n_azimuth);
  for (std::size_t ir = 0; ir < radial.size(); ++ir) {
    const double r = radial.nodes[ir];
    for (int j = 0; j < n_polar; ++j) {
      const double ct = polar.nodes[j];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int k = 0; k < n_azimuth; ++k) {
        const double phi = (k + 0.5) * dphi;
        out.points.push_back({center[0] + r * st * std::cos(phi),
                              center[1] + r * st * std::sin(phi), center[2] + r * ct});
        out.weights.push_back(radial.weights[ir] * r * r * polar.weights[j] * dphi);
      }
    }
  }
  return out;
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double smooth_step_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  const double da = a / (t * t), db = -b / ((1.0 - t) * (1.0 - t));
  return (da * b - a * db) / ((a + b) * (a + b));
}

double unit_sphere_area(int dimension) {
  switch (dimension) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw std::invalid_argument("unit_sphere_area: dimension must be 1, 2 or 3");
  }
}

}  // namespace fermigas::quad
