#include "fermigas/determinantal_check.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fermigas/determinantal.hpp"
#include "fermigas/fermi_box.hpp"
#include "fermigas/quadrature.hpp"
#include "fermigas/random.hpp"

namespace fermigas {

namespace {

struct SmoothWeight {
  Point centre{};
  double depth = 0.0, width = 0.0, tilt = 0.0;
  int dim = 1;

  double operator()(const Point& x) const {
    double r2 = 0.0;
    for (int c = 0; c < dim; ++c) r2 += (x[c] - centre[c]) * (x[c] - centre[c]);
    return (1.0 + tilt * (x[0] - 0.5)) * (1.0 - depth * std::exp(-r2 / (2.0 * width * width)));
  }
};

SmoothWeight draw_weight(Rng& rng, int dim) {
  SmoothWeight w;
  w.dim = dim;
  for (int c = 0; c < dim; ++c) w.centre[c] = rng.uniform(0.2, 0.8);
  w.depth = rng.uniform(0.2, 0.8);
  w.width = rng.uniform(0.3, 0.5);
  w.tilt = rng.uniform(-0.5, 0.5);
  return w;
}

struct Grid {
  std::vector<Point> points;
  std::vector<double> weights;
};

Grid box_grid(int dim, int panels, int order) {
  const std::vector<double> breaks{0.0, 1.0};
  const quad::Rule r = quad::composite(breaks, panels, order);
  Grid g;
  const std::size_t m = r.size();
  const std::size_t m1 = dim >= 2 ? m : 1, m2 = dim >= 3 ? m : 1;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m1; ++j)
      for (std::size_t k = 0; k < m2; ++k) {
        g.points.push_back({r.nodes[i], dim >= 2 ? r.nodes[j] : 0.0, dim >= 3 ? r.nodes[k] : 0.0});
        g.weights.push_back(r.weights[i] * (dim >= 2 ? r.weights[j] : 1.0) * (dim >= 3 ? r.weights[k] : 1.0));
      }
  return g;
}

using Rows = std::array<const double*, 4>;

double det2(double a, double b, double c, double d) { return a * d - b * c; }

double det3(const double* r0, const double* r1, const double* r2) {
  return r0[0] * det2(r1[1], r1[2], r2[1], r2[2]) - r0[1] * det2(r1[0], r1[2], r2[0], r2[2]) +
         r0[2] * det2(r1[0], r1[1], r2[0], r2[1]);
}

double determinant(const Rows& r, int n) {
  switch (n) {
    case 1: return r[0][0];
    case 2: return det2(r[0][0], r[0][1], r[1][0], r[1][1]);
    case 3: return det3(r[0], r[1], r[2]);
    default: {
      double out = 0.0, sign = 1.0;
      for (int c = 0; c < 4; ++c) {
        double m[3][3];
        for (int i = 1; i < 4; ++i)
          for (int j = 0, jj = 0; j < 4; ++j)
            if (j != c) m[i - 1][jj++] = r[static_cast<std::size_t>(i)][j];
        out += sign * r[0][c] * det3(m[0], m[1], m[2]);
        sign = -sign;
      }
      return out;
    }
  }
}

double factorial(long n) {
  double f = 1.0;
  for (long i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

// Integral over the free coordinates of |det|^2 prod g_i(x_i) / n!, first rows at `fixed`.
double partial_integral(const FermiSeaSpec& sea, const std::vector<Point>& fixed, const Grid& grid,
                        const std::function<double(int, const Point&)>& sq_weight) {
  const auto n = static_cast<int>(sea.modes.size());
  const auto k = static_cast<int>(fixed.size());
  const int free = n - k;
  std::vector<Eigen::VectorXd> base(static_cast<std::size_t>(k));
  Rows rows{};
  double fixed_weight = 1.0;
  for (int i = 0; i < k; ++i) {
    base[static_cast<std::size_t>(i)] = sea.orbitals(fixed[static_cast<std::size_t>(i)]);
    rows[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)].data();
    fixed_weight *= sq_weight(i, fixed[static_cast<std::size_t>(i)]);
  }
  const std::size_t G = grid.points.size();
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> table(static_cast<Eigen::Index>(G), n);
  for (std::size_t g = 0; g < G; ++g) table.row(static_cast<Eigen::Index>(g)) = sea.orbitals(grid.points[g]).transpose();
  std::vector<std::vector<double>> wg(static_cast<std::size_t>(free), std::vector<double>(G));
  for (int f = 0; f < free; ++f)
    for (std::size_t g = 0; g < G; ++g) wg[static_cast<std::size_t>(f)][g] = grid.weights[g] * sq_weight(k + f, grid.points[g]);

  double total = 0.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(free), 0);
  while (true) {
    double w = 1.0;
    for (int f = 0; f < free; ++f) {
      const auto fs = static_cast<std::size_t>(f);
      w *= wg[fs][idx[fs]];
      rows[static_cast<std::size_t>(k + f)] = table.data() + idx[fs] * static_cast<std::size_t>(n);
    }
    const double det = determinant(rows, n);
    total += w * det * det;
    int f = free - 1;
    while (f >= 0 && ++idx[static_cast<std::size_t>(f)] == G) idx[static_cast<std::size_t>(f--)] = 0;
    if (f < 0) break;
  }
  return fixed_weight * total / factorial(n);
}

struct Case {
  int dim;
  long n;
  int weights;
  int panels, order;
};

constexpr Case kCases[] = {
    {1, 2, 2, 2, 12}, {1, 3, 3, 2, 12}, {1, 4, 5, 2, 12}, {2, 2, 3, 2, 8}, {2, 3, 3, 2, 8}, {3, 2, 4, 2, 7},
};

}  // namespace

DeterminantalCheckReport determinantal_check(std::uint64_t seed, double tolerance, int scale) {
  DeterminantalCheckReport report;
  report.seed = seed;
  report.tolerance = tolerance;
  Rng rng(seed);
  auto record = [&](const Case& c, int w, const char* what, double formula, double brute) {
    DeterminantalCheck check{c.dim, c.n, w, what, formula, brute, 0.0, false};
    check.error = std::abs(formula - brute) / std::max(std::abs(brute), 1.0);
    check.passed = check.error <= tolerance;
    report.max_error = std::max(report.max_error, check.error);
    if (!check.passed) ++report.failures;
    report.checks.push_back(std::move(check));
  };

  for (const Case& c : kCases) {
    const FermiSeaSpec sea = make_fermi_sea(c.n, 1.0, c.dim);
    const Grid grid = box_grid(c.dim, c.panels, c.order);
    const int count = std::max(1, c.weights * scale);
    for (int w = 0; w < count; ++w) {
      const SmoothWeight h = draw_weight(rng, c.dim);
      const SmoothWeight kf = draw_weight(rng, c.dim);
      auto sq = [&](int, const Point& x) { return h(x) * h(x); };
      const WeightedSlater ws(sea, h);
      const double norm = partial_integral(sea, {}, grid, sq);
      record(c, w, "norm", slater_norm(ws), norm);

      for (long k = 1; k <= std::min<long>(3, c.n); ++k) {
        std::vector<Point> pts;
        for (long i = 0; i < k; ++i) {
          Point x{0.0, 0.0, 0.0};
          for (int a = 0; a < c.dim; ++a) x[static_cast<std::size_t>(a)] = rng.uniform();
          pts.push_back(x);
        }
        const double binom = factorial(c.n) / (factorial(k) * factorial(c.n - k));
        const double brute = binom * partial_integral(sea, pts, grid, sq) / norm;
        static const char* names[] = {"density1", "density2", "density3"};
        record(c, w, names[k - 1], k_particle_density(ws, pts), brute);
      }

      double trace = 0.0;
      for (long i = 0; i < c.n; ++i)
        trace += partial_integral(sea, {}, grid, [&](int j, const Point& x) {
          const double v = j == i ? kf(x) : h(x);
          return v * v;
        });
      record(c, w, "trace", weighted_trace(sea, h, kf), trace);
      ++report.weights;
    }
  }
  return report;
}

nlohmann::json to_json(const DeterminantalCheckReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"dimension", c.dimension},
                      {"n", c.n},
                      {"weight", c.weight},
                      {"quantity", c.quantity},
                      {"formula", c.formula},
                      {"brute_force", c.brute_force},
                      {"error", c.error},
                      {"passed", c.passed}});
  return {{"seed", report.seed},
          {"tolerance", report.tolerance},
          {"weights", report.weights},
          {"max_error", report.max_error},
          {"failures", report.failures},
          {"passed", report.passed()},
          {"checks", checks}};
}

}  // namespace fermigas
