#include "fermigas/dyson.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "fermigas/parallel.hpp"
#include "fermigas/quadrature.hpp"
#include "fermigas/random.hpp"

namespace fermigas {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

double bump(double t) { return t >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - t * t)); }

Point minus(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Point& a) { return std::sqrt(dot(a, a)); }

}  // namespace

double TestFunction::value(const Point& x) const {
  const Point xb = minus(x, bump_centre);
  const double B = bump(norm(xb) / bump_radius);
  if (B == 0.0) return 0.0;
  const Point xg = minus(x, gauss_centre);
  double v = B * std::exp(-dot(xg, xg) / (2.0 * gauss_width * gauss_width)) *
             (1.0 + modulation * std::cos(dot(wave, x) + phase));
  const double e2 = 0.25 * core_width * core_width;
  for (const auto& y : centres) {
    const double r = distance(x, y);
    v *= (1.0 - core_depth * (1.0 - quad::smooth_step((r - core_start) / core_width))) *
         (1.0 - tail * core_start / std::sqrt(r * r + e2));
  }
  return v;
}

double TestFunction::value_and_gradient(const Point& x, Point& gradient) const {
  gradient = {0.0, 0.0, 0.0};
  const Point xb = minus(x, bump_centre);
  const double tb = norm(xb) / bump_radius;
  const double B = bump(tb);
  if (B == 0.0) return 0.0;
  // grad B = B * (-2 / (1 - t^2)^2) * (x - x_B) / L^2
  const double gB = B * (-2.0 / ((1.0 - tb * tb) * (1.0 - tb * tb))) / (bump_radius * bump_radius);
  const Point xg = minus(x, gauss_centre);
  const double G = std::exp(-dot(xg, xg) / (2.0 * gauss_width * gauss_width));
  const double gG = -G / (gauss_width * gauss_width);
  const double arg = dot(wave, x) + phase;
  const double M = 1.0 + modulation * std::cos(arg);
  const double gM = -modulation * std::sin(arg);

  double C = 1.0;
  Point gC{0.0, 0.0, 0.0};
  const double e2 = 0.25 * core_width * core_width;
  for (const auto& y : centres) {
    const Point d = minus(x, y);
    const double r = norm(d);
    const double u = (r - core_start) / core_width;
    const double step = 1.0 - core_depth * (1.0 - quad::smooth_step(u));
    const double q = std::sqrt(r * r + e2);
    const double T = 1.0 - tail * core_start / q;
    const double c = step * T;
    // (dc/dr) / r
    const double dc = (r > 0.0 ? core_depth * quad::smooth_step_derivative(u) / (core_width * r) * T : 0.0) +
                      step * tail * core_start / (q * q * q);
    for (int k = 0; k < 3; ++k) gC[k] = gC[k] * c + C * dc * d[k];
    C *= c;
  }
  const double BGM = B * G * M;
  for (int k = 0; k < 3; ++k)
    gradient[k] = (gB * xb[k] * G * M + B * gG * xg[k] * M + B * G * gM * wave[k]) * C + BGM * gC[k];
  return BGM * C;
}

DysonResolution DysonResolution::coarse() {
  DysonResolution r;
  r.order = 6;
  r.fine_panel = 0.35;
  r.coarse_panel = 0.7;
  r.polar = 12;
  r.azimuth = 24;
  r.grid_fine = 1.5;
  r.grid_floor = 0.25;
  r.grid_coarse = 1.5;
  r.grid_order = 6;
  r.momentum_panels = 3;
  r.momentum_order = 8;
  r.chebyshev = 10;
  return r;
}

DysonResolution DysonResolution::fine() {
  DysonResolution r;
  r.order = 8;
  r.fine_panel = 0.25;
  r.coarse_panel = 0.5;
  r.polar = 16;
  r.azimuth = 32;
  r.grid_fine = 1.0;
  r.grid_floor = 0.15;
  r.grid_coarse = 1.0;
  r.grid_order = 6;
  r.momentum_panels = 4;
  r.momentum_order = 8;
  r.chebyshev = 12;
  return r;
}

double DysonTerms::rhs(const SoftPotentialKit& kit, double eps) const {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("dyson: eps must lie in (0, 1]");
  return (1.0 - eps) * kit.u_coefficient() * u_term - kit.w_coefficient() / eps * w_term;
}

namespace {

// Interval [lo, hi] split into panels: widths at most `fine` inside the given
// intervals and at most `coarse` elsewhere.
quad::Rule axis_rule(double lo, double hi, std::vector<std::pair<double, double>> fine_intervals, double fine,
                     double coarse, int order) {
  std::vector<std::pair<double, double>> merged;
  std::sort(fine_intervals.begin(), fine_intervals.end());
  for (auto [a, b] : fine_intervals) {
    a = std::max(a, lo);
    b = std::min(b, hi);
    if (b <= a) continue;
    if (!merged.empty() && a <= merged.back().second) merged.back().second = std::max(merged.back().second, b);
    else merged.emplace_back(a, b);
  }
  std::vector<double> bps{lo};
  auto fill = [&](double a, double b, double width) {
    if (b <= a) return;
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / width - 1e-9)));
    for (int i = 1; i <= n; ++i) bps.push_back(a + (b - a) * i / n);
  };
  double at = lo;
  for (const auto& [a, b] : merged) {
    fill(at, a, coarse);
    fill(a, b, fine);
    at = b;
  }
  fill(at, hi, coarse);
  return quad::composite(bps, 1, order);
}

quad::Rule radial_rule(std::vector<double> cuts, double r_max, double shell_lo, double shell_hi, double fine,
                       double coarse, int order) {
  cuts.push_back(0.0);
  cuts.push_back(r_max);
  std::vector<double> c;
  for (double x : cuts)
    if (x >= 0.0 && x <= r_max) c.push_back(x);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), c.end());
  std::vector<double> bps{c.front()};
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const double a = c[i], b = c[i + 1];
    const bool in_shell = a < shell_hi && b > shell_lo;
    const double width = in_shell ? fine : coarse;
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / width - 1e-9)));
    for (int k = 1; k <= n; ++k) bps.push_back(a + (b - a) * k / n);
  }
  return quad::composite(bps, 1, order);
}

quad::Rule single_node() { return {{0.0}, {1.0}}; }

Eigen::MatrixXcd phase_matrix(const quad::Rule& out, const quad::Rule& in, double sign, bool weight_in) {
  Eigen::MatrixXcd E(out.size(), in.size());
  for (std::size_t m = 0; m < out.size(); ++m)
    for (std::size_t i = 0; i < in.size(); ++i) {
      const double t = sign * out.nodes[m] * in.nodes[i];
      E(m, i) = cd(std::cos(t), std::sin(t)) * (weight_in ? in.weights[i] : 1.0);
    }
  return E;
}

// out(m1, m2, m3) = sum K1(m1, i) K2(m2, j) K3(m3, k) in(i, j, k), first index fastest.
Eigen::VectorXcd contract(const Eigen::VectorXcd& in, std::size_t n1, std::size_t n2, std::size_t n3,
                          const Eigen::MatrixXcd& K1, const Eigen::MatrixXcd& K2, const Eigen::MatrixXcd& K3) {
  const auto m1 = K1.rows(), m2 = K2.rows(), m3 = K3.rows();
  const Eigen::Map<const Eigen::MatrixXcd> X(in.data(), static_cast<Eigen::Index>(n1),
                                             static_cast<Eigen::Index>(n2 * n3));
  const Eigen::MatrixXcd A = K1 * X;  // m1 x (n2 n3)
  Eigen::MatrixXcd B(m1 * m2, static_cast<Eigen::Index>(n3));
  for (std::size_t k = 0; k < n3; ++k) {
    const Eigen::MatrixXcd Bk = A.middleCols(static_cast<Eigen::Index>(k * n2), static_cast<Eigen::Index>(n2)) *
                                K2.transpose();
    B.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::VectorXcd>(Bk.data(), m1 * m2);
  }
  const Eigen::MatrixXcd C = B * K3.transpose();  // (m1 m2) x m3
  return Eigen::Map<const Eigen::VectorXcd>(C.data(), m1 * m2 * m3);
}

// Barycentric Lagrange basis and derivative on Chebyshev points of the first kind.
struct Barycentric {
  std::vector<double> x, w;

  explicit Barycentric(std::vector<double> nodes) : x(std::move(nodes)), w(x.size()) {
    const auto n = static_cast<double>(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
      w[j] = (j % 2 ? -1.0 : 1.0) * std::sin((2.0 * static_cast<double>(j) + 1.0) * kPi / (2.0 * n));
  }

  void basis(double t, std::vector<double>& L, std::vector<double>& dL) const {
    const std::size_t n = x.size();
    L.assign(n, 0.0);
    dL.assign(n, 0.0);
    if (n == 1) {
      L[0] = 1.0;
      return;
    }
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(t - x[j]) < 1e-13 * (1.0 + std::abs(x[j]))) t += 1e-9 * (1.0 + std::abs(t));
    double S = 0.0, dS = 0.0;
    std::vector<double> q(n);
    for (std::size_t j = 0; j < n; ++j) {
      q[j] = w[j] / (t - x[j]);
      S += q[j];
      dS -= q[j] / (t - x[j]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      L[j] = q[j] / S;
      dL[j] = (-q[j] / (t - x[j]) * S - q[j] * dS) / (S * S);
    }
  }
};

// Tensor grid over the bump's bounding box, fine around the cores.
std::array<quad::Rule, 3> tensor_axes(const TestFunction& psi, const DysonResolution& res, int d) {
  const double shell_hi = psi.core_start + psi.core_width;
  std::array<quad::Rule, 3> axes;
  for (int k = 0; k < 3; ++k) {
    if (k >= d) {
      axes[k] = single_node();
      continue;
    }
    std::vector<std::pair<double, double>> fi;
    for (const auto& y : psi.centres) fi.emplace_back(y[k] - shell_hi - 0.1, y[k] + shell_hi + 0.1);
    axes[k] = axis_rule(psi.bump_centre[k] - psi.bump_radius, psi.bump_centre[k] + psi.bump_radius, fi,
                        std::max(res.grid_fine * psi.core_width, res.grid_floor), res.grid_coarse, res.grid_order);
  }
  return axes;
}

// hat psi on a tensor Gauss-Legendre grid over the momentum cube [-2/s, 2/s]^d,
// outside of which 1 - chi vanishes.
struct MomentumGrid {
  std::array<quad::Rule, 3> axes;
  Eigen::VectorXcd values;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  [[nodiscard]] Point node(std::size_t idx) const {
    const std::size_t m1 = axes[0].size(), m2 = axes[1].size();
    return {axes[0].nodes[idx % m1], axes[1].nodes[(idx / m1) % m2], axes[2].nodes[idx / (m1 * m2)]};
  }
  [[nodiscard]] double weight(std::size_t idx) const {
    const std::size_t m1 = axes[0].size(), m2 = axes[1].size();
    return axes[0].weights[idx % m1] * axes[1].weights[(idx / m1) % m2] * axes[2].weights[idx / (m1 * m2)];
  }
};

// `grid` holds quadrature-weighted samples of psi on `axes`.
MomentumGrid transform(const Eigen::VectorXcd& grid, const std::array<quad::Rule, 3>& axes,
                       const MomentumCutoff& cut, const DysonResolution& res, int d) {
  MomentumGrid out;
  const double pmax = cut.support();
  for (int k = 0; k < 3; ++k) {
    if (k >= d) {
      out.axes[k] = single_node();
      continue;
    }
    const std::array<double, 2> ends{-pmax, pmax};
    out.axes[k] = quad::composite(ends, res.momentum_panels, res.momentum_order);
  }
  out.values = std::pow(2.0 * kPi, -0.5 * d) *
               contract(grid, axes[0].size(), axes[1].size(), axes[2].size(),
                        phase_matrix(out.axes[0], axes[0], 1.0, false), phase_matrix(out.axes[1], axes[1], 1.0, false),
                        phase_matrix(out.axes[2], axes[2], 1.0, false));
  return out;
}

// Low-momentum part P = psi - xi, the inverse transform of (1 - chi) hat psi,
// sampled on a Chebyshev grid over [-R, R]^d and interpolated with its gradient.
class LowPass {
 public:
  struct Scratch {
    std::array<std::vector<double>, 3> L, dL;
  };

  LowPass(const MomentumGrid& hat, const MomentumCutoff& cut, double R, const DysonResolution& res, int d) {
    Eigen::VectorXcd F(hat.values.size());
    for (std::size_t idx = 0; idx < hat.size(); ++idx)
      F[static_cast<Eigen::Index>(idx)] =
          hat.weight(idx) * cut.one_minus_chi(norm(hat.node(idx))) * hat.values[static_cast<Eigen::Index>(idx)];
    std::array<quad::Rule, 3> caxes;
    for (int k = 0; k < 3; ++k) {
      if (k >= d) {
        caxes[k] = single_node();
        continue;
      }
      caxes[k].nodes = quad::chebyshev_points(res.chebyshev, -R, R);
      caxes[k].weights.assign(caxes[k].nodes.size(), 1.0);
    }
    const Eigen::VectorXcd Pc =
        std::pow(2.0 * kPi, -0.5 * d) *
        contract(F, hat.axes[0].size(), hat.axes[1].size(), hat.axes[2].size(),
                 phase_matrix(caxes[0], hat.axes[0], -1.0, false), phase_matrix(caxes[1], hat.axes[1], -1.0, false),
                 phase_matrix(caxes[2], hat.axes[2], -1.0, false));
    for (int k = 0; k < 3; ++k) {
      q_[k] = caxes[k].size();
      bary_[k] = Barycentric(caxes[k].nodes);
    }
    values_.resize(static_cast<std::size_t>(Pc.size()));
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = Pc[static_cast<Eigen::Index>(i)].real();
  }

  // {P, dP/dx, dP/dy, dP/dz}
  std::array<double, 4> evaluate(const Point& x, Scratch& s) const {
    for (int a = 0; a < 3; ++a) bary_[a].basis(x[a], s.L[a], s.dL[a]);
    const std::size_t q1 = q_[0], q2 = q_[1], q3 = q_[2];
    std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
    for (std::size_t c = 0; c < q3; ++c) {
      double sy = 0.0, sxy = 0.0, syy = 0.0;
      for (std::size_t b = 0; b < q2; ++b) {
        const double* row = &values_[q1 * (b + q2 * c)];
        double v = 0.0, vx = 0.0;
        for (std::size_t a = 0; a < q1; ++a) {
          v += s.L[0][a] * row[a];
          vx += s.dL[0][a] * row[a];
        }
        sy += s.L[1][b] * v;
        sxy += s.L[1][b] * vx;
        syy += s.dL[1][b] * v;
      }
      out[0] += s.L[2][c] * sy;
      out[1] += s.L[2][c] * sxy;
      out[2] += s.L[2][c] * syy;
      out[3] += s.dL[2][c] * sy;
    }
    return out;
  }

 private:
  std::array<std::size_t, 3> q_{};
  std::array<Barycentric, 3> bary_{Barycentric({0.0}), Barycentric({0.0}), Barycentric({0.0})};
  std::vector<double> values_;
};

void check_geometry(const TestFunction& psi, const RadialPotential& v, const SoftPotentialKit& kit, bool field) {
  if (psi.dimension != kit.dimension()) throw std::invalid_argument("dyson: test function and kit dimensions differ");
  if (psi.centres.empty()) throw std::invalid_argument("dyson: test function needs at least one centre");
  if (!(psi.core_width > 0.0) || !(psi.bump_radius > 0.0) || !(psi.gauss_width > 0.0))
    throw std::invalid_argument("dyson: test function widths must be positive");
  if (!field && (psi.centres.size() != 1 || norm(psi.centres[0]) > 1e-12))
    throw std::invalid_argument("dyson: single-centre form needs one centre at the origin");
  for (std::size_t i = 0; i < psi.centres.size(); ++i)
    for (std::size_t j = i + 1; j < psi.centres.size(); ++j)
      if (distance(psi.centres[i], psi.centres[j]) < 2.0 * kit.R())
        throw std::invalid_argument("dyson: centres closer than 2R");
  if (v.has_hard_core() && (psi.core_depth != 1.0 || psi.core_start < v.hard_core_radius()))
    throw std::invalid_argument("dyson: test function must vanish on the hard core");
  if (v.range() > kit.R()) throw std::invalid_argument("dyson: potential range exceeds R");
}

}  // namespace

DysonTerms dyson_terms(const TestFunction& psi, const RadialPotential& v, const SoftPotentialKit& kit,
                       const DysonResolution& res, bool field_form) {
  check_geometry(psi, v, kit, field_form);
  const int d = kit.dimension();
  const double R = kit.R();
  const double shell_lo = psi.core_start, shell_hi = psi.core_start + psi.core_width;
  const double fine = res.fine_panel * psi.core_width;
  DysonTerms out;

  // Field form: |grad psi|^2 and w_R |psi|^2 are split with the partition
  // pi(|x - y_i|), 1 up to the end of the core shell and 0 from R on. The pi parts
  // use ball rules around the centres; the tensor grid only sees 1 - sum pi.
  if (field_form && shell_hi >= R) throw std::invalid_argument("dyson: core shell must end inside R");
  auto partition = [&](double r) { return 1.0 - quad::smooth_step((r - shell_hi) / (R - shell_hi)); };
  auto w_all = [&](const Point& x) {
    double ws = 0.0;
    for (const auto& y : psi.centres) ws += kit.w(distance(x, y));
    return ws;
  };

  // Radial terms around each centre from angular averages of |psi|^2.
  const AnnulusU& U = kit.U();
  for (const auto& y : psi.centres) {
    // In the field form the ball stays inside |x - y| <= R, free of other cores.
    const double reach = distance(psi.bump_centre, y) + psi.bump_radius;
    const double r_max = field_form ? std::min(reach, R) : reach;
    std::vector<double> cuts = v.breakpoints();
    for (double c : {shell_lo, shell_hi, U.R0, U.R, v.range()}) cuts.push_back(c);
    const quad::Rule radial = radial_rule(cuts, r_max, shell_lo, shell_hi, fine, res.coarse_panel, res.order);
    const quad::PointRule ball = quad::ball_rule(d, radial, res.polar, res.azimuth, y);
    const std::size_t per = ball.size() / radial.size();
    for (std::size_t i = 0; i < radial.size(); ++i) {
      const double r = radial.nodes[i];
      double A = 0.0, Ag = 0.0, Aw = 0.0;
      for (std::size_t k = i * per; k < (i + 1) * per; ++k) {
        if (field_form) {
          Point g;
          const double p = psi.value_and_gradient(ball.points[k], g);
          A += ball.weights[k] * p * p;
          Ag += ball.weights[k] * dot(g, g);
          if (p != 0.0) Aw += ball.weights[k] * w_all(ball.points[k]) * p * p;
        } else {
          const double p = psi.value(ball.points[k]);
          A += ball.weights[k] * p * p;
        }
      }
      if (field_form) {
        const double pr = partition(r);
        out.kinetic += pr * Ag;
        out.w_term += pr * Aw;
      }
      if (A == 0.0) continue;
      out.u_term += U(r) * A;
      if (!field_form) out.w_term += kit.w_exact(r) * A;
      if (r < v.range() || v.has_hard_core()) {
        const double vr = v.evaluate(r);
        if (std::isinf(vr)) throw std::invalid_argument("dyson: test function does not vanish on the hard core");
        out.potential += 0.5 * vr * A;
      }
    }
  }

  const MomentumCutoff& cut = kit.cutoff();
  if (cut.is_identity()) {
    // chi = 1: xi = psi.
    if (!field_form) {
      const quad::Rule radial = radial_rule({shell_lo, shell_hi}, R, shell_lo, shell_hi, fine, res.coarse_panel,
                                            res.order);
      const quad::PointRule ball = quad::ball_rule(d, radial, res.polar, res.azimuth);
      for (std::size_t k = 0; k < ball.size(); ++k) {
        Point g;
        psi.value_and_gradient(ball.points[k], g);
        out.kinetic += ball.weights[k] * dot(g, g);
      }
      return out;
    }
  }

  const std::array<quad::Rule, 3> axes = tensor_axes(psi, res, d);
  const std::size_t n1 = axes[0].size(), n2 = axes[1].size(), n3 = axes[2].size();
  Eigen::VectorXcd grid(static_cast<Eigen::Index>(n1 * n2 * n3));
  std::vector<double> slab_kinetic(n3, 0.0), slab_w(n3, 0.0);
  parallel_for(n3, [&](std::size_t k) {
    double acc = 0.0, acc_w = 0.0;
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t i = 0; i < n1; ++i) {
        const Point x{axes[0].nodes[i], axes[1].nodes[j], axes[2].nodes[k]};
        const double w = axes[0].weights[i] * axes[1].weights[j] * axes[2].weights[k];
        double p;
        if (field_form) {
          Point g;
          p = psi.value_and_gradient(x, g);
          double m = 1.0;
          for (const auto& y : psi.centres) m -= partition(distance(x, y));
          if (m > 0.0) {
            acc += m * w * dot(g, g);
            if (p != 0.0) acc_w += m * w * w_all(x) * p * p;
          }
        } else {
          p = psi.value(x);
        }
        grid[static_cast<Eigen::Index>(i + n1 * (j + n2 * k))] = w * p;
      }
    slab_kinetic[k] = acc;
    slab_w[k] = acc_w;
  });
  if (field_form) {
    for (std::size_t k = 0; k < n3; ++k) {
      out.kinetic += slab_kinetic[k];
      out.w_term += slab_w[k];
    }
    if (cut.is_identity()) return out;
  }

  const MomentumGrid hat = transform(grid, axes, cut, res, d);

  if (field_form) {
    // integral |grad xi|^2 = integral |grad psi|^2 - integral (1 - chi^2) |p|^2 |hat psi|^2
    double low = 0.0;
    for (std::size_t idx = 0; idx < hat.size(); ++idx) {
      const Point p = hat.node(idx);
      const double pn = norm(p);
      const double chi = cut.chi(pn);
      low += hat.weight(idx) * (1.0 - chi * chi) * pn * pn * std::norm(hat.values[static_cast<Eigen::Index>(idx)]);
    }
    out.kinetic -= low;
    return out;
  }

  const LowPass P(hat, cut, R, res, d);
  const quad::Rule radial =
      radial_rule({shell_lo, shell_hi}, R, shell_lo, shell_hi, fine, res.coarse_panel, res.order);
  const quad::PointRule ball = quad::ball_rule(d, radial, res.polar, res.azimuth);
  const std::size_t per = ball.size() / radial.size();
  std::vector<double> shell(radial.size(), 0.0);
  parallel_for(radial.size(), [&](std::size_t ir) {
    LowPass::Scratch scratch;
    double acc = 0.0;
    for (std::size_t k = ir * per; k < (ir + 1) * per; ++k) {
      const Point& x = ball.points[k];
      const auto lp = P.evaluate(x, scratch);
      Point g;
      psi.value_and_gradient(x, g);
      const Point e{g[0] - lp[1], g[1] - lp[2], g[2] - lp[3]};
      acc += ball.weights[k] * dot(e, e);
    }
    shell[ir] = acc;
  });
  for (double s : shell) out.kinetic += s;
  return out;
}

std::vector<std::array<double, 4>> low_momentum_part(const TestFunction& psi, const SoftPotentialKit& kit,
                                                     std::span<const Point> points, const DysonResolution& res) {
  const int d = kit.dimension();
  if (psi.dimension != d) throw std::invalid_argument("low_momentum_part: dimensions differ");
  std::vector<std::array<double, 4>> out(points.size(), {0.0, 0.0, 0.0, 0.0});
  if (kit.cutoff().is_identity()) return out;
  for (const auto& x : points)
    for (int k = 0; k < d; ++k)
      if (std::abs(x[k]) > kit.R()) throw std::invalid_argument("low_momentum_part: point outside [-R, R]^d");
  const std::array<quad::Rule, 3> axes = tensor_axes(psi, res, d);
  const std::size_t n1 = axes[0].size(), n2 = axes[1].size(), n3 = axes[2].size();
  Eigen::VectorXcd grid(static_cast<Eigen::Index>(n1 * n2 * n3));
  for (std::size_t k = 0; k < n3; ++k)
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t i = 0; i < n1; ++i) {
        const Point x{axes[0].nodes[i], axes[1].nodes[j], axes[2].nodes[k]};
        grid[static_cast<Eigen::Index>(i + n1 * (j + n2 * k))] =
            axes[0].weights[i] * axes[1].weights[j] * axes[2].weights[k] * psi.value(x);
      }
  const LowPass P(transform(grid, axes, kit.cutoff(), res, d), kit.cutoff(), kit.R(), res, d);
  LowPass::Scratch scratch;
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = P.evaluate(points[i], scratch);
  return out;
}

DysonGap DysonEvaluation::gap(const SoftPotentialKit& kit, double eps) const {
  DysonGap g;
  g.lhs = fine.lhs();
  g.rhs = fine.rhs(kit, eps);
  g.gap = g.lhs - g.rhs;
  g.eta = std::abs(g.gap - coarse.gap(kit, eps));
  return g;
}

DysonEvaluation evaluate_dyson(const TestFunction& psi, const RadialPotential& v, const SoftPotentialKit& kit,
                               bool field_form) {
  return {dyson_terms(psi, v, kit, DysonResolution::coarse(), field_form),
          dyson_terms(psi, v, kit, DysonResolution::fine(), field_form)};
}

DysonGap dyson_gap(const TestFunction& psi, const RadialPotential& v, const SoftPotentialKit& kit, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("dyson: eps must lie in (0, 1]");
  return evaluate_dyson(psi, v, kit, false).gap(kit, eps);
}

DysonGap dyson_field_gap(const TestFunction& psi, const RadialPotential& v, const SoftPotentialKit& kit,
                         double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("dyson: eps must lie in (0, 1]");
  return evaluate_dyson(psi, v, kit, true).gap(kit, eps);
}

namespace {

Point random_direction(Rng& rng, int d) {
  Point u{0.0, 0.0, 0.0};
  double n = 0.0;
  while (n < 1e-8) {
    for (int k = 0; k < d; ++k) u[k] = rng.normal();
    n = norm(u);
  }
  for (int k = 0; k < d; ++k) u[k] /= n;
  return u;
}

}  // namespace

std::vector<TestFunction> dyson_corpus(std::size_t count, int dimension, const RadialPotential& v, double R,
                                       unsigned long long seed, std::size_t centres) {
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("dyson_corpus: dimension must be 2 or 3");
  if (!(R > 0.0) || centres == 0) throw std::invalid_argument("dyson_corpus: need R > 0 and a centre");
  Rng rng(seed);
  const double range = v.range() > 0.0 ? v.range() : 0.5 * R;
  std::vector<TestFunction> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    TestFunction t;
    t.dimension = dimension;
    t.centres.assign(1, Point{0.0, 0.0, 0.0});
    for (std::size_t i = 1; i < centres; ++i) {
      Point y = t.centres.back();
      y[0] += R * rng.uniform(2.0, 2.4);
      t.centres.push_back(y);
    }
    const double half_chain = 0.5 * t.centres.back()[0];
    const Point mid{half_chain, 0.0, 0.0};

    // Odd entries are near-extremal: thin core, scattering-like tail, flat envelope.
    const bool extremal = n % 2 == 1;
    t.core_width = range * (extremal ? rng.uniform(0.1, 0.3) : rng.uniform(0.3, 1.0));
    if (v.has_hard_core()) {
      t.core_start = v.hard_core_radius() * rng.uniform(1.0, 1.15);
      t.core_depth = 1.0;
      t.tail = extremal ? rng.uniform(0.6, 1.0) : rng.uniform(0.0, 1.0);
    } else {
      t.core_start = range * rng.uniform(0.0, 1.0);
      t.core_depth = extremal ? 1.0 : rng.uniform(0.0, 1.0);
      t.tail = rng.uniform(0.0, 1.0) * (extremal ? 1.0 : 1.0 - t.core_depth);
    }

    const Point ob = random_direction(rng, dimension);
    const double off = 0.3 * R * rng.uniform();
    for (int k = 0; k < 3; ++k) t.bump_centre[k] = mid[k] + off * ob[k];
    t.bump_radius = half_chain + off + R * rng.uniform(1.1, extremal ? 2.5 : 1.8);

    const Point og = random_direction(rng, dimension);
    const double offg = 0.3 * R * rng.uniform();
    for (int k = 0; k < 3; ++k) t.gauss_centre[k] = mid[k] + offg * og[k];
    t.gauss_centre[0] += half_chain * rng.uniform(-1.0, 1.0);
    t.gauss_width = R * (extremal ? rng.uniform(2.0, 20.0) : rng.uniform(0.4, 1.0)) + half_chain;

    t.modulation = rng.uniform(0.0, extremal ? 0.2 : 0.8);
    const Point ow = random_direction(rng, dimension);
    const double k = rng.uniform(0.0, 2.0) / R;
    for (int a = 0; a < 3; ++a) t.wave[a] = k * ow[a];
    t.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    out.push_back(t);
  }
  return out;
}

std::vector<DysonCorpusReport> run_dyson_corpus(std::span<const TestFunction> corpus, const RadialPotential& v,
                                                const SoftPotentialKit& kit, std::span<const double> eps_values,
                                                bool field_form, double tolerance) {
  std::vector<DysonEvaluation> evals(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) { evals[i] = evaluate_dyson(corpus[i], v, kit, field_form); });
  std::vector<DysonCorpusReport> out;
  for (double eps : eps_values) {
    DysonCorpusReport rep;
    rep.count = corpus.size();
    rep.eps = eps;
    rep.min_gap = std::numeric_limits<double>::infinity();
    rep.min_relative_gap = std::numeric_limits<double>::infinity();
    for (const auto& e : evals) {
      const DysonGap g = e.gap(kit, eps);
      const double scale = std::max(g.lhs, std::numeric_limits<double>::min());
      rep.min_gap = std::min(rep.min_gap, g.gap);
      rep.min_relative_gap = std::min(rep.min_relative_gap, g.gap / scale);
      rep.max_eta = std::max(rep.max_eta, g.eta);
      rep.max_relative_eta = std::max(rep.max_relative_eta, g.eta / scale);
      if (g.gap < -tolerance * g.lhs) ++rep.violations;
    }
    out.push_back(rep);
  }
  return out;
}

}  // namespace fermigas
