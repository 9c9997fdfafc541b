#include "fermigas/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "fermigas/errors.hpp"
#include "fermigas/io.hpp"
#include "fermigas/quadrature.hpp"

namespace fermigas {

namespace {

using State = std::array<double, 2>;
namespace odeint = boost::numeric::odeint;

constexpr double kPi = std::numbers::pi;

struct Sample {
  double r;
  double weight;  // interior quadrature weight, 0 for plain samples
};

// Least-squares fit y = alpha * x + beta.
void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& alpha,
                double& beta, double& misfit) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  alpha = sxy / sxx;
  beta = my - alpha * mx;
  misfit = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    misfit = std::max(misfit, std::abs(y[i] - (alpha * x[i] + beta)));
}

ScatteringSolution solve_once(const RadialPotential& pot, int dim, double step_tol,
                              double r_max) {
  ScatteringSolution sol;
  sol.dimension = dim;
  sol.potential = pot;
  sol.r_max = r_max;
  const double R0 = pot.range();
  const double core = pot.hard_core_radius();
  sol.r_start = core;

  std::vector<double> cuts;
  cuts.push_back(core);
  for (double b : pot.breakpoints())
    if (b > core && b < R0) cuts.push_back(b);
  cuts.push_back(R0);

  State x = core > 0.0 || dim == 3 ? State{0.0, 1.0} : State{1.0, 0.0};
  const double kappa_max = std::sqrt(0.5 * pot.max_value());

  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c], hi = cuts[c + 1];
    if (!(hi > lo)) continue;
    const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * kappa_max * (hi - lo))));
    const std::array<double, 2> ends{lo, hi};
    const quad::Rule gl = quad::composite(ends, panels, 16);

    std::vector<Sample> samples;
    samples.push_back({lo, 0.0});
    for (std::size_t i = 0; i < gl.size(); ++i) samples.push_back({gl.nodes[i], gl.weights[i]});
    const int uniform = std::max(256, static_cast<int>(64.0 * kappa_max * (hi - lo)));
    for (int i = 1; i < uniform; ++i) samples.push_back({lo + (hi - lo) * i / uniform, 0.0});
    samples.push_back({hi, 0.0});
    std::sort(samples.begin(), samples.end(), [](auto& p, auto& q) { return p.r < q.r; });

    auto v_at = [&](double r) { return pot.evaluate_within(r, lo, hi); };
    auto rhs = [&](const State& s, State& ds, double r) {
      const double v = v_at(r);
      if (dim == 3) {
        ds[0] = s[1];
        ds[1] = 0.5 * v * s[0];
      } else {
        ds[0] = r > 0.0 ? s[1] / r : 0.0;
        ds[1] = 0.5 * v * r * s[0];
      }
    };

    std::vector<double> times;
    times.reserve(samples.size());
    for (const auto& s : samples) times.push_back(s.r);
    std::size_t idx = 0;
    auto observer = [&](const State& s, double r) {
      const double v = v_at(r);
      const Sample& smp = samples[idx++];
      // the first sample of every later interval duplicates the previous end point
      const double dd = dim == 3 ? 0.5 * v * s[0] : 0.5 * v * r * s[0];
      if (c > 0 && smp.r == lo && smp.weight == 0.0) {
        sol.ddy.back() = dd;  // right-sided value at the breakpoint
      } else {
        sol.grid.push_back(r);
        sol.y.push_back(s[0]);
        sol.dy.push_back(s[1]);
        sol.ddy.push_back(dd);
        sol.ddy_left.push_back(dd);
      }
      if (smp.weight > 0.0) {
        double integrand;
        if (dim == 3) {
          const double g = s[1] - s[0] / r;
          integrand = 4.0 * kPi * (g * g + 0.5 * v * s[0] * s[0]);
        } else {
          integrand = 2.0 * kPi * (s[1] * s[1] / r + 0.5 * v * r * s[0] * s[0]);
        }
        sol.interior_energy_raw += smp.weight * integrand;
      }
    };
    auto stepper = odeint::make_dense_output(step_tol, step_tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), (hi - lo) * 1e-3, observer);
  }

  // GL nodes may coincide with uniform samples; keep the grid strictly increasing.
  {
    std::vector<double> g, y, dy, ddy, ddl;
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
      if (!g.empty() && sol.grid[i] <= g.back()) continue;
      g.push_back(sol.grid[i]);
      y.push_back(sol.y[i]);
      dy.push_back(sol.dy[i]);
      ddy.push_back(sol.ddy[i]);
      ddl.push_back(sol.ddy_left[i]);
    }
    sol.grid = std::move(g);
    sol.y = std::move(y);
    sol.dy = std::move(dy);
    sol.ddy = std::move(ddy);
    sol.ddy_left = std::move(ddl);
  }

  // Exterior: integrate the free equation and fit the asymptotic form.
  std::vector<double> xs, ys;
  {
    const int m = 100;
    std::vector<double> times;
    for (int i = 0; i <= m; ++i) times.push_back(R0 + (r_max - R0) * i / m);
    auto rhs = [&](const State& s, State& ds, double r) {
      if (dim == 3) {
        ds[0] = s[1];
        ds[1] = 0.0;
      } else {
        ds[0] = s[1] / r;
        ds[1] = 0.0;
      }
    };
    auto observer = [&](const State& s, double r) {
      xs.push_back(dim == 3 ? r : std::log(r));
      ys.push_back(s[0]);
    };
    State xe = x;
    auto stepper = odeint::make_dense_output(step_tol, step_tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, rhs, xe, times.begin(), times.end(), (r_max - R0) * 1e-3, observer);
  }
  double alpha, beta, misfit;
  linear_fit(xs, ys, alpha, beta, misfit);
  sol.slope = alpha;
  if (dim == 3) {
    sol.a = -beta / alpha;
    sol.log_a = sol.a > 0.0 ? std::log(sol.a) : -RadialPotential::infinity;
    sol.residual = misfit / (alpha * r_max);
  } else {
    sol.log_a = -beta / alpha;
    sol.a = std::exp(sol.log_a);
    sol.residual = misfit / std::abs(alpha * std::log(r_max) + beta);
  }
  return sol;
}

ScatteringSolution trivial_solution(const RadialPotential& pot, int dim, double r_max) {
  ScatteringSolution sol;
  sol.dimension = dim;
  sol.potential = pot;
  sol.r_max = r_max;
  return sol;
}

ScatteringSolution hard_core_solution(const RadialPotential& pot, int dim, double r_max) {
  ScatteringSolution sol;
  sol.dimension = dim;
  sol.potential = pot;
  sol.r_max = r_max;
  const double c = pot.hard_core_radius();
  sol.r_start = c;
  sol.a = c;
  sol.log_a = std::log(c);
  sol.slope = 1.0;
  sol.grid = {c};
  sol.y = {0.0};
  sol.dy = {1.0};
  sol.ddy = {0.0};
  sol.ddy_left = {0.0};
  return sol;
}

}  // namespace

void ScatteringSolution::raw_at(double r, double& value, double& deriv) const {
  // cubic Hermite on the stored samples, separately for y and dy
  auto it = std::upper_bound(grid.begin(), grid.end(), r);
  std::size_t i = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  if (i + 1 >= grid.size()) i = grid.size() >= 2 ? grid.size() - 2 : 0;
  if (grid.size() < 2) {
    value = y[0];
    deriv = dimension == 3 ? dy[0] : 0.0;
    return;
  }
  const double r0 = grid[i], r1 = grid[i + 1], h = r1 - r0;
  const double t = (r - r0) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  auto yprime = [&](std::size_t k) {
    if (dimension == 3) return dy[k];
    return grid[k] > 0.0 ? dy[k] / grid[k] : 0.0;
  };
  value = h00 * y[i] + h10 * h * yprime(i) + h01 * y[i + 1] + h11 * h * yprime(i + 1);
  const double d = h00 * dy[i] + h10 * h * ddy[i] + h01 * dy[i + 1] + h11 * h * ddy_left[i + 1];
  if (dimension == 3) {
    deriv = d;
  } else {
    deriv = r > 0.0 ? d / r : 0.0;
  }
}

double ScatteringSolution::phi(double r) const {
  if (r < 0.0) throw std::invalid_argument("phi: r must be >= 0");
  if (trivial()) return 1.0;
  if (r < r_start) return 0.0;
  const double R0 = potential.range();
  if (dimension == 3) {
    if (r >= R0) return 1.0 - a / r;
    if (r == 0.0) return dy[0] / slope;
    double u, du;
    raw_at(r, u, du);
    return u / (slope * r);
  }
  if (r >= R0) return std::log(r) - log_a;
  double p, dp;
  raw_at(r, p, dp);
  return p / slope;
}

double ScatteringSolution::dphi(double r) const {
  if (r < 0.0) throw std::invalid_argument("dphi: r must be >= 0");
  if (trivial()) return 0.0;
  if (r < r_start) return 0.0;
  const double R0 = potential.range();
  if (dimension == 3) {
    if (r >= R0) return a / (r * r);
    if (r_start == 0.0 && r < 1e-4 * R0) {
      const double v0 = potential.evaluate_within(0.0, 0.0, grid.size() > 1 ? grid[1] : R0);
      return dy[0] * v0 * r / (6.0 * slope);
    }
    double u, du;
    raw_at(r, u, du);
    return (du * r - u) / (slope * r * r);
  }
  if (r >= R0) return 1.0 / r;
  double p, dp;
  raw_at(r, p, dp);
  return dp / slope;
}

double ScatteringSolution::normalized_phi(double r, double R_ref) const {
  if (dimension == 3 || trivial()) return phi(r);
  return phi(r) / (std::log(R_ref) - log_a);
}

double ScatteringSolution::normalized_dphi(double r, double R_ref) const {
  if (dimension == 3 || trivial()) return dphi(r);
  return dphi(r) / (std::log(R_ref) - log_a);
}

std::string ScatteringSolution::profile_csv(double R_ref) const {
  std::string out = "r,phi,dphi\n";
  auto row = [&](double r) {
    const double p = R_ref > 0.0 ? normalized_phi(r, R_ref) : phi(r);
    const double d = R_ref > 0.0 ? normalized_dphi(r, R_ref) : dphi(r);
    out += io::format_double(r) + "," + io::format_double(p) + "," + io::format_double(d) + "\n";
  };
  const double R0 = potential.range();
  for (double r : grid)
    if (r < R0) row(r);
  const int m = 200;
  for (int i = 0; i <= m; ++i) row(R0 + (r_max - R0) * i / m);
  return out;
}

ScatteringSolution solve_zero_energy(const RadialPotential& potential, int dimension,
                                     double tolerance, double R_hint) {
  if (dimension != 2 && dimension != 3)
    throw std::invalid_argument("solve_zero_energy: dimension must be 2 or 3");
  if (!(tolerance > 0.0)) throw std::invalid_argument("solve_zero_energy: tolerance must be positive");
  const auto report = potential.validate();
  if (!report.passed())
    throw std::invalid_argument("solve_zero_energy: invalid potential (" + report.issues.front().message + ")");
  const double R0 = potential.range();
  const double r_max = std::max(10.0 * R0, R_hint + R0);

  if (potential.is_identically_zero()) return trivial_solution(potential, dimension, r_max);
  if (potential.has_hard_core() && potential.tail_is_zero())
    return hard_core_solution(potential, dimension, r_max);

  const double fine_tol = std::max(tolerance * 1e-3, 1e-14);
  ScatteringSolution fine = solve_once(potential, dimension, fine_tol, r_max);
  ScatteringSolution coarse = solve_once(potential, dimension, fine_tol * 10.0, r_max);
  double change;
  if (dimension == 3) {
    change = std::abs(fine.a - coarse.a) / std::max(std::abs(fine.a), 1e-300);
  } else {
    change = std::abs(fine.log_a - coarse.log_a) / std::max(1.0, std::abs(fine.log_a));
  }
  fine.residual = std::max(fine.residual, change);
  if (fine.residual > tolerance) {
    throw ConvergenceError("solve_zero_energy: requested tolerance not reached", fine.residual);
  }
  return fine;
}

double scattering_energy_integral(const ScatteringSolution& solution, double R) {
  const double R0 = solution.potential.range();
  if (R < R0) throw std::invalid_argument("scattering_energy_integral: R must be >= R0");
  if (solution.trivial()) return 0.0;
  if (solution.dimension == 3) {
    const double a = solution.a;
    const double interior = solution.interior_energy_raw / (solution.slope * solution.slope);
    return interior + 4.0 * kPi * a * a * (1.0 / R0 - 1.0 / R);
  }
  const double k = solution.slope;
  const double norm = k * (std::log(R) - solution.log_a);
  return (solution.interior_energy_raw + 2.0 * kPi * k * k * std::log(R / R0)) / (norm * norm);
}

CutoffProfile::CutoffProfile(ScatteringSolution solution, double R)
    : solution_(std::move(solution)), R_(R) {
  const double R0 = solution_.potential.range();
  if (!(R > R0)) throw std::invalid_argument("xi_profile: R must exceed R0");
  if (solution_.trivial()) {
    identity_ = true;
    scale_ = 1.0;
    integral_xi_ = 0.0;
    return;
  }
  if (solution_.dimension == 3) {
    if (!(solution_.a < R)) throw std::invalid_argument("xi_profile: requires a < R");
    scale_ = 1.0 / (1.0 - solution_.a / R);
  } else {
    scale_ = 1.0 / (std::log(R) - solution_.log_a);
  }
  const double energy = scattering_energy_integral(solution_, R);
  integral_xi_ = solution_.dimension == 3 ? energy * scale_ * scale_ : energy;
}

CutoffProfile CutoffProfile::identity(int dimension, double R) {
  CutoffProfile p;
  p.solution_.dimension = dimension;
  p.solution_.potential = RadialPotential::zero(R);
  p.R_ = R;
  p.identity_ = true;
  return p;
}

double CutoffProfile::f(double r) const {
  if (identity_ || r >= R_) return 1.0;
  return scale_ * solution_.phi(r);
}

double CutoffProfile::df(double r) const {
  if (identity_ || r >= R_) return 0.0;
  return scale_ * solution_.dphi(r);
}

double CutoffProfile::xi(double r) const {
  if (identity_ || r > R_ || r < core_radius()) return 0.0;
  const double fv = f(r), dv = df(r);
  const double v = solution_.potential.evaluate(r);
  return dv * dv + 0.5 * v * fv * fv;
}

CutoffProfile xi_profile(const ScatteringSolution& solution, double R) { return {solution, R}; }

double square_barrier_scattering_length(double v0, double R0) {
  if (v0 == 0.0) return 0.0;
  const double kappa = std::sqrt(0.5 * v0);
  return R0 - std::tanh(kappa * R0) / kappa;
}

}  // namespace fermigas
