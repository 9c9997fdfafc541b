#include "fermigas/energy_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include <boost/math/tools/minima.hpp>
#include <nlohmann/json.hpp>

#include "fermigas/parallel.hpp"

namespace fermigas {

namespace {

constexpr double kPi = std::numbers::pi;
const double kKinetic3 = 0.6 * std::pow(6.0 * kPi * kPi, 2.0 / 3.0);
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double kinetic_constant(int d) { return d == 3 ? kKinetic3 : 2.0 * kPi; }

void check_dimension(int d) {
  if (d != 2 && d != 3) throw std::invalid_argument("dimension must be 2 or 3");
}

// Smallest integer >= x and the residue, in extended precision.
std::pair<double, double> round_up(double x) {
  const long double lx = x;
  const long double n = std::ceil(lx);
  return {static_cast<double>(n), static_cast<double>(n - lx)};
}

struct Assembly {
  std::vector<Channel> channels;
  bool feasible = true;
  std::string reason;

  void add(std::string name, double size, double energy, bool bracketed) {
    if (bracketed && !(size < 0.5) && feasible) {
      feasible = false;
      reason = name + " = " + std::to_string(size) + " is not below 0.5";
    }
    channels.push_back({std::move(name), size, energy, bracketed});
  }
  void require(bool ok, const std::string& why) {
    if (!ok && feasible) {
      feasible = false;
      reason = why;
    }
  }
  [[nodiscard]] double sum() const {
    double out = 0.0;
    for (const auto& c : channels) out += c.energy;
    return out;
  }
};

// Channels of the 3D finite-box bound. kin and inter are the main kinetic and
// interaction terms already divided by `volume`; eps < 0 selects the optimal eps.
double add_box_channels(Assembly& out, double kin, double inter, double n, double m, double ell, double R, double s,
                        double a, double eps, double volume, const BoundConstants& c) {
  const double nm = n + m;
  const double fs = std::pow(n, -1.0 / 3.0) + std::pow(m, -1.0 / 3.0);
  const double density_s2 = std::exp(2.0 / 3.0 * std::log(nm) + 2.0 * std::log(s / ell));
  out.add("kinetic_finite_size", c.get("kinetic_finite_size") * fs, kin * c.get("kinetic_finite_size") * fs, true);
  const std::pair<const char*, double> brackets[] = {
      {"interaction_aR2_s3", a * R * R / (s * s * s)},
      {"interaction_density_s2", density_s2},
      {"interaction_a_R", a / R},
      {"interaction_finite_size", fs},
      {"interaction_norm_s5", std::exp(8.0 / 3.0 * std::log(nm) + 5.0 * std::log(s / ell))},
  };
  for (const auto& [name, value] : brackets) out.add(name, c.get(name) * value, inter * c.get(name) * value, true);

  // eps * inter + B / eps, B the Jastrow-gradient coefficient.
  const double B =
      c.get("jastrow_gradient") * std::exp(8.0 / 3.0 * std::log(nm) + 3.0 * std::log(s) - 5.0 * std::log(ell)) / volume;
  if (eps < 0.0) eps = inter > 0.0 ? std::sqrt(B / inter) : std::numeric_limits<double>::infinity();
  const bool vanishing = std::isinf(eps);
  out.add("eps", eps, vanishing ? 0.0 : inter * eps, false);
  out.add("jastrow_gradient", c.get("jastrow_gradient") * density_s2, vanishing || B == 0.0 ? 0.0 : B / eps, true);
  out.require(s >= 2.0 * R, "s < 2R");
  out.require(n >= 1.0 && m >= 1.0, "fewer than one particle per species");
  return eps;
}

void finish(BoundReport& r, Assembly&& a, double interaction_unit) {
  const double sum = a.sum();
  r.channels = std::move(a.channels);
  r.feasible = a.feasible;
  r.infeasible_reason = a.reason;
  r.excess = r.upper ? sum : -sum;
  r.total = r.leading() + r.excess;
  r.eps_rho = r.excess / interaction_unit;
}

BoundReport base_report(const GasPoint& p, bool upper) {
  BoundReport r;
  r.dimension = p.dimension;
  r.upper = upper;
  r.gas_parameter = p.gas_parameter;
  return r;
}

BoundReport upper_3d(const GasPoint& p, const BoundConstants& c) {
  BoundReport r = base_report(p, true);
  const double x = p.gas_parameter;
  const double s1 = p.fraction, s2 = 1.0 - p.fraction;
  const double r0 = p.R0_over_a * x;
  Schedule& sc = r.schedule;
  sc.R = std::pow(x, 7.0 / 9.0);
  sc.s = 2.0 * sc.R;
  sc.ell = std::pow(x, -11.0 / 9.0);
  const double lp = std::log1p(r0 / sc.ell);
  const double volume = std::exp(3.0 * std::log(sc.ell + r0));
  std::tie(sc.n, sc.eps1) = round_up(s1 * volume);
  std::tie(sc.m, sc.eps2) = round_up(s2 * volume);
  const double l1 = std::log1p(sc.eps1 / (s1 * volume)), l2 = std::log1p(sc.eps2 / (s2 * volume));

  r.leading_kinetic = kKinetic3 * (std::pow(s1, 5.0 / 3.0) + std::pow(s2, 5.0 / 3.0));
  r.leading_interaction = 8.0 * kPi * x * s1 * s2;

  Assembly a;
  const double k1 = 5.0 / 3.0 * l1 + 2.0 * lp, k2 = 5.0 / 3.0 * l2 + 2.0 * lp;
  a.add("kinetic_packing", r0 / sc.ell,
        kKinetic3 * (std::pow(s1, 5.0 / 3.0) * std::expm1(k1) + std::pow(s2, 5.0 / 3.0) * std::expm1(k2)), false);
  const double ki = l1 + l2 + 3.0 * lp;
  a.add("interaction_packing", r0 / sc.ell, r.leading_interaction * std::expm1(ki), false);
  const double kin = kKinetic3 * (std::pow(s1, 5.0 / 3.0) * std::exp(k1) + std::pow(s2, 5.0 / 3.0) * std::exp(k2));
  const double inter = r.leading_interaction * std::exp(ki);
  sc.eps = add_box_channels(a, kin, inter, sc.n, sc.m, sc.ell, sc.R, sc.s, x, -1.0, volume, c);
  a.require(sc.R > r0, "R <= R0");
  finish(r, std::move(a), x);
  return r;
}

BoundReport lower_3d(const GasPoint& p, const BoundConstants& c) {
  BoundReport r = base_report(p, false);
  const double x = p.gas_parameter;
  const double s1 = p.fraction, s2 = 1.0 - p.fraction;
  const double r0 = p.R0_over_a * x;
  Schedule& sc = r.schedule;
  sc.R = std::pow(x, 3.0 / 26.0);
  sc.s = std::pow(x, 1.0 / 26.0);
  sc.eps = sc.delta = std::pow(x, 1.0 / 13.0);
  r.leading_kinetic = kKinetic3 * (std::pow(s1, 5.0 / 3.0) + std::pow(s2, 5.0 / 3.0));
  r.leading_interaction = 8.0 * kPi * x * s1 * s2;
  const double inter = r.leading_interaction;

  Assembly a;
  const double kf2 = std::pow(6.0 * kPi * kPi, 2.0 / 3.0);
  const double soft = c.get("lower_soft_potential") * sc.R * sc.R / (sc.eps * sc.s * sc.s);
  a.add("lower_eps", sc.eps, inter * sc.eps, true);
  a.add("lower_delta", sc.delta, inter * sc.delta, true);
  a.add("lower_fermi_cutoff", kf2 * sc.s * sc.s, inter * kf2 * sc.s * sc.s, true);
  a.add("lower_soft_potential", soft, inter * soft, true);
  const double nn = c.get("lower_nearest_neighbour") * sc.R * sc.R;
  a.add("lower_nearest_neighbour", nn, x * nn, false);
  const double R3 = sc.R * sc.R * sc.R - r0 * r0 * r0;
  const double apriori = c.get("lower_apriori") * std::sqrt(x) * (1.0 + 1.0 / sc.delta) *
                         (x / R3 + x / (sc.eps * sc.s * sc.s * sc.R));
  a.add("lower_apriori", apriori / x, apriori, false);
  a.require(sc.R > r0, "R <= R0");
  finish(r, std::move(a), x);
  return r;
}

BoundReport lower_2d(const GasPoint& p, const BoundConstants& c) {
  BoundReport r = base_report(p, false);
  const double L = p.gas_parameter;
  const double s1 = p.fraction, s2 = 1.0 - p.fraction;
  const double log_r0a = std::log(p.R0_over_a);
  const double r0 = std::exp(log_r0a - 0.5 * L);
  Schedule& sc = r.schedule;
  sc.R = std::pow(L, -3.0 / 20.0);
  sc.s = std::pow(L, -1.0 / 20.0);
  sc.eps = sc.delta = std::pow(L, -0.1);
  r.leading_kinetic = 2.0 * kPi * (s1 * s1 + s2 * s2);
  r.leading_interaction = 8.0 * kPi * s1 * s2 / L;
  const double inter = r.leading_interaction;

  const double log_Ra = std::log(sc.R) + 0.5 * L;
  const double nu = 0.25 * (sc.R * sc.R * (2.0 * log_Ra - 1.0) - r0 * r0 * (2.0 * log_r0a - 1.0));
  const double u_mass = (sc.R * sc.R - r0 * r0) / (2.0 * nu);  // (2 pi)^-1 integral U

  Assembly a;
  const double soft = c.get("lower_soft_potential") * sc.R * sc.R / (sc.eps * sc.s * sc.s);
  a.add("lower_eps", sc.eps, inter * sc.eps, true);
  a.add("lower_delta", sc.delta, inter * sc.delta, true);
  a.add("lower_fermi_cutoff", 4.0 * kPi * sc.s * sc.s, inter * 4.0 * kPi * sc.s * sc.s, true);
  a.add("lower_soft_potential", soft, inter * soft, true);
  const double nn = c.get("lower_nearest_neighbour") * sc.R;
  a.add("lower_nearest_neighbour", nn, nn / L, false);
  const double apriori = c.get("lower_apriori") / std::sqrt(L) * (1.0 + 1.0 / sc.delta) *
                         (1.0 / nu + u_mass / (sc.eps * sc.s * sc.s));
  a.add("lower_apriori", apriori * L, apriori, false);
  a.require(sc.R > r0 && nu > 0.0, "R <= R0");
  finish(r, std::move(a), 1.0 / L);
  return r;
}

BoundReport upper_2d(const GasPoint& p, const BoundConstants& c) {
  BoundReport r = base_report(p, true);
  const double L = p.gas_parameter;
  const double alpha = c.alpha_2d;
  const double s1 = p.fraction, s2 = 1.0 - p.fraction;
  const double r0 = std::exp(std::log(p.R0_over_a) - 0.5 * L);
  Schedule& sc = r.schedule;
  sc.R = std::pow(L, -alpha);
  sc.s = 2.0 * sc.R;
  sc.ell = std::pow(L, alpha - 1.0);
  const double lp = std::log1p(r0 / sc.ell);
  const double volume = std::exp(2.0 * std::log(sc.ell + r0));
  std::tie(sc.n, sc.eps1) = round_up(s1 * volume);
  std::tie(sc.m, sc.eps2) = round_up(s2 * volume);
  const double l1 = std::log1p(sc.eps1 / (s1 * volume)), l2 = std::log1p(sc.eps2 / (s2 * volume));

  r.leading_kinetic = 2.0 * kPi * (s1 * s1 + s2 * s2);
  r.leading_interaction = 8.0 * kPi * s1 * s2 / L;
  const double log_Ra = 0.5 * L - alpha * std::log(L);

  Assembly a;
  a.require(log_Ra > 0.0, "R <= a");
  const double k1 = 2.0 * l1 + 2.0 * lp, k2 = 2.0 * l2 + 2.0 * lp;
  a.add("kinetic_packing", r0 / sc.ell, 2.0 * kPi * (s1 * s1 * std::expm1(k1) + s2 * s2 * std::expm1(k2)), false);
  const double pair = 4.0 * kPi * s1 * s2 / log_Ra;
  a.add("interaction_log", alpha * std::log(L) / log_Ra,
        4.0 * kPi * s1 * s2 * 2.0 * alpha * std::log(L) / (log_Ra * L), true);
  const double ki = l1 + l2 + 2.0 * lp;
  a.add("interaction_packing", r0 / sc.ell, pair * std::expm1(ki), false);
  const double kin = 2.0 * kPi * (s1 * s1 * std::exp(k1) + s2 * s2 * std::exp(k2));
  const double inter = pair * std::exp(ki);
  const double fs = 1.0 / std::sqrt(sc.n) + 1.0 / std::sqrt(sc.m);
  const double kfs = c.get("kinetic_finite_size") * fs, ifs = c.get("interaction_finite_size") * fs;
  a.add("kinetic_finite_size", kfs, kin * kfs, true);
  a.add("interaction_finite_size", ifs, inter * ifs, true);
  const double y = c.get("norm_2d") * (sc.n + sc.m) * sc.R * sc.R;
  a.add("norm_2d", y, y < 1.0 ? (kin * (1.0 + kfs) + inter * (1.0 + ifs)) * y / (1.0 - y) : kNaN, true);
  a.require(sc.R > r0, "R <= R0");
  finish(r, std::move(a), 1.0 / L);
  return r;
}

double checked_fraction(double rho1, double rho2) {
  if (!(rho1 > 0.0) || !(rho2 > 0.0)) throw std::invalid_argument("bound schedules need rho1, rho2 > 0");
  return rho1 / (rho1 + rho2);
}

}  // namespace

GasState GasState::uniform(int dimension, std::vector<double> densities, double a, double R0) {
  GasState s;
  s.dimension = dimension;
  const std::size_t q = densities.size();
  s.densities = std::move(densities);
  s.a.assign(q, std::vector<double>(q, a));
  s.R0 = R0;
  s.validate();
  return s;
}

double GasState::total_density() const {
  double rho = 0.0;
  for (double r : densities) rho += r;
  return rho;
}

void GasState::validate() const {
  check_dimension(dimension);
  if (densities.empty()) throw std::invalid_argument("GasState: no species");
  for (double r : densities)
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("GasState: densities must be finite and >= 0");
  if (a.size() != densities.size()) throw std::invalid_argument("GasState: a must be q x q");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != densities.size()) throw std::invalid_argument("GasState: a must be q x q");
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (!(a[i][j] >= 0.0)) throw std::invalid_argument("GasState: scattering lengths must be >= 0");
      if (a[i][j] != a[j][i]) throw std::invalid_argument("GasState: a must be symmetric");
    }
  }
  if (!(R0 >= 0.0)) throw std::invalid_argument("GasState: R0 must be >= 0");
}

LeadingEnergy leading_energy_parts(const GasState& state) {
  state.validate();
  const int d = state.dimension;
  const double rho = state.total_density();
  LeadingEnergy e;
  for (double r : state.densities) e.kinetic += kinetic_constant(d) * std::pow(r, (d + 2.0) / d);
  const std::size_t q = state.densities.size();
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = i + 1; j < q; ++j) {
      const double pair = state.densities[i] * state.densities[j];
      const double aij = state.a[i][j];
      if (pair == 0.0 || aij == 0.0) continue;
      if (d == 3) {
        e.interaction += 8.0 * kPi * aij * pair;
      } else {
        const double g = rho * aij * aij;
        if (!(g < 1.0)) throw std::invalid_argument("leading_energy: 2D needs rho a^2 < 1");
        e.interaction += 8.0 * kPi * pair / std::abs(std::log(g));
      }
    }
  return e;
}

double leading_energy(const GasState& state) { return leading_energy_parts(state).total(); }

std::vector<double> balanced_minimum(int dimension, double rho, double a) {
  check_dimension(dimension);
  if (!(rho > 0.0) || !(a >= 0.0)) throw std::invalid_argument("balanced_minimum: need rho > 0, a >= 0");
  auto energy = [&](double t) {
    return leading_energy(GasState::uniform(dimension, {rho * t, rho * (1.0 - t)}, a));
  };
  const auto [t, value] = boost::math::tools::brent_find_minima(energy, 0.0, 1.0, 52);
  (void)value;
  const double hi = std::max(t, 1.0 - t);
  return {rho * hi, rho * (1.0 - hi)};
}

const std::vector<std::string>& BoundConstants::names() {
  static const std::vector<std::string> n{
      "kinetic_finite_size",  "interaction_aR2_s3",      "interaction_density_s2", "interaction_a_R",
      "interaction_finite_size", "interaction_norm_s5",  "jastrow_gradient",       "norm_2d",
      "lower_soft_potential", "lower_nearest_neighbour", "lower_apriori"};
  return n;
}

double BoundConstants::get(const std::string& name) const {
  const auto it = values_.find(name);
  if (it != values_.end()) return it->second;
  if (std::find(names().begin(), names().end(), name) == names().end())
    throw std::invalid_argument("unknown bound constant '" + name + "'");
  return 1.0;
}

void BoundConstants::set(const std::string& name, double value) {
  if (std::find(names().begin(), names().end(), name) == names().end())
    throw std::invalid_argument("unknown bound constant '" + name + "'");
  if (!(value >= 0.0) || !std::isfinite(value))
    throw std::invalid_argument("bound constant '" + name + "' must be finite and >= 0");
  values_[name] = value;
}

BoundConstants BoundConstants::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("constants: expected a JSON object");
  if (!doc.contains("version") || doc["version"] != 1) throw std::invalid_argument("constants: version must be 1");
  BoundConstants c;
  if (doc.contains("constants")) {
    if (!doc["constants"].is_object()) throw std::invalid_argument("constants: 'constants' must be an object");
    for (const auto& [name, value] : doc["constants"].items()) {
      if (!value.is_number()) throw std::invalid_argument("constants: '" + name + "' must be a number");
      c.set(name, value.get<double>());
    }
  }
  if (doc.contains("alpha_2d")) {
    if (!doc["alpha_2d"].is_number() || !(doc["alpha_2d"].get<double>() > 1.0))
      throw std::invalid_argument("constants: 'alpha_2d' must be a number > 1");
    c.alpha_2d = doc["alpha_2d"].get<double>();
  }
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "version" && key != "constants" && key != "alpha_2d")
      throw std::invalid_argument("constants: unknown field '" + key + "'");
  }
  return c;
}

const Channel& BoundReport::channel(const std::string& name) const {
  for (const auto& c : channels)
    if (c.name == name) return c;
  throw std::invalid_argument("no channel '" + name + "'");
}

BoxBound upper_bound_box(double n, double m, double ell, double R, double s, double eps, double a, double R0,
                         const BoundConstants& constants) {
  if (!(n >= 1.0) || !(m >= 1.0) || !(ell > 0.0) || !(R > 0.0) || !(s > 0.0) || !(a >= 0.0) || !(R0 >= 0.0) ||
      !(eps > 0.0))
    throw std::invalid_argument("upper_bound_box: need n, m >= 1 and positive lengths, eps");
  auto make = [&](double e, double& used) {
    BoundReport r;
    r.dimension = 3;
    r.upper = true;
    r.leading_kinetic = kKinetic3 * (std::pow(n, 5.0 / 3.0) + std::pow(m, 5.0 / 3.0)) / (ell * ell);
    r.leading_interaction = 8.0 * kPi * a * n * m / (ell * ell * ell);
    r.schedule = {R, s, ell, 0.0, 0.0, n, m, 0.0, 0.0};
    Assembly as;
    used = add_box_channels(as, r.leading_kinetic, r.leading_interaction, n, m, ell, R, s, a, e, 1.0, constants);
    r.schedule.eps = used;
    as.require(R > R0, "R <= R0");
    finish(r, std::move(as), a > 0.0 ? a * (n + m) * (n + m) / (ell * ell * ell) : kNaN);
    return r;
  };
  BoxBound out;
  double used = 0.0;
  out.at_eps = make(eps, used);
  out.optimal = make(-1.0, out.optimal_eps);
  return out;
}

GasPoint GasPoint::from_densities(int dimension, double rho1, double rho2, double a, double R0) {
  check_dimension(dimension);
  GasPoint p;
  p.dimension = dimension;
  p.fraction = checked_fraction(rho1, rho2);
  if (!(a > 0.0) || !(R0 >= a)) throw std::invalid_argument("bound schedules need a > 0 and R0 >= a");
  const double rho = rho1 + rho2;
  p.R0_over_a = R0 / a;
  if (dimension == 3) {
    p.gas_parameter = a * std::cbrt(rho);
  } else {
    const double g = std::log(rho) + 2.0 * std::log(a);
    if (!(g < 0.0)) throw std::invalid_argument("2D bound schedules need rho a^2 < 1");
    p.gas_parameter = -g;
  }
  p.validate();
  return p;
}

void GasPoint::validate() const {
  check_dimension(dimension);
  if (!(gas_parameter > 0.0) || !std::isfinite(gas_parameter))
    throw std::invalid_argument("GasPoint: gas parameter must be positive and finite");
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("GasPoint: fraction must lie in (0, 1)");
  if (!(R0_over_a >= 1.0)) throw std::invalid_argument("GasPoint: R0 / a must be >= 1");
}

BoundReport upper_bound_schedule(const GasPoint& point, const BoundConstants& constants) {
  point.validate();
  return point.dimension == 3 ? upper_3d(point, constants) : upper_2d(point, constants);
}

BoundReport lower_bound_schedule(const GasPoint& point, const BoundConstants& constants) {
  point.validate();
  return point.dimension == 3 ? lower_3d(point, constants) : lower_2d(point, constants);
}

namespace {

BoundReport with_unit(BoundReport r, int dimension, double rho) {
  r.log_energy_unit = (dimension + 2.0) / dimension * std::log(rho);
  return r;
}

}  // namespace

BoundReport upper_bound_schedule(double rho1, double rho2, double a, double R0, const BoundConstants& constants,
                                 int dimension) {
  return with_unit(upper_bound_schedule(GasPoint::from_densities(dimension, rho1, rho2, a, R0), constants), dimension,
                   rho1 + rho2);
}

BoundReport lower_bound_schedule(double rho1, double rho2, double a, double R0, const BoundConstants& constants,
                                 int dimension) {
  return with_unit(lower_bound_schedule(GasPoint::from_densities(dimension, rho1, rho2, a, R0), constants), dimension,
                   rho1 + rho2);
}

bool BoundsSweep::all_sandwiched() const {
  for (const auto& row : rows)
    if (row.upper.feasible && row.lower.feasible && !row.sandwich()) return false;
  return true;
}

BoundsSweep sweep_bounds(int dimension, std::span<const double> gas_parameters, double fraction, double R0_over_a,
                         const BoundConstants& constants) {
  check_dimension(dimension);
  BoundsSweep out;
  out.dimension = dimension;
  out.rows.resize(gas_parameters.size());
  parallel_for(gas_parameters.size(), [&](std::size_t i) {
    BoundsRow& row = out.rows[i];
    row.point = {dimension, gas_parameters[i], fraction, R0_over_a};
    row.upper = upper_bound_schedule(row.point, constants);
    row.lower = lower_bound_schedule(row.point, constants);
  });

  std::vector<double> ux, uy, lx, ly, lnl, scaled, reduced, ratio_x, ratio_y;
  for (const auto& row : out.rows) {
    const double g = row.point.gas_parameter;
    if (!row.upper.feasible || !row.lower.feasible) ++out.infeasible;
    if (row.upper.feasible) {
      ux.push_back(g);
      uy.push_back(row.upper.eps_rho);
      if (dimension == 3) {
        out.upper_prefactor = std::max(out.upper_prefactor, row.upper.eps_rho / std::pow(g, 2.0 / 9.0));
      } else {
        const double lg = std::log(g);
        out.upper_prefactor = std::max(out.upper_prefactor, row.upper.eps_rho * g / lg);
        lnl.push_back(lg);
        scaled.push_back(row.upper.eps_rho * g);
        reduced.push_back(row.upper.eps_rho / lg);
        const double log_Ra = 0.5 * g - constants.alpha_2d * lg;
        ratio_x.push_back(lg / g);
        ratio_y.push_back(g / (2.0 * log_Ra) - 1.0);
      }
    }
    if (row.lower.feasible) {
      lx.push_back(g);
      ly.push_back(-row.lower.eps_rho);
      const double expected = dimension == 3 ? std::pow(g, 1.0 / 13.0) : std::pow(g, -0.1);
      out.lower_prefactor = std::max(out.lower_prefactor, -row.lower.eps_rho / expected);
    }
  }
  const LineFit none{kNaN, kNaN, kNaN, kNaN};
  out.upper_fit = out.lower_fit = out.upper_log_fit = out.upper_reduced_fit = out.ratio_fit = none;
  if (ux.size() >= 3) {
    out.upper_fit = fit_power_law(ux, uy);
    if (dimension == 2) {
      out.upper_log_fit = fit_line(lnl, scaled);
      out.upper_reduced_fit = fit_power_law(ux, reduced);
      out.ratio_fit = fit_line(ratio_x, ratio_y);
    }
  }
  if (lx.size() >= 3) out.lower_fit = fit_power_law(lx, ly);
  return out;
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json channels = nlohmann::json::array();
  for (const auto& c : r.channels)
    channels.push_back({{"name", c.name}, {"size", c.size}, {"energy", c.energy}, {"bracketed", c.bracketed}});
  const Schedule& s = r.schedule;
  return {{"dimension", r.dimension},
          {"kind", r.upper ? "upper" : "lower"},
          {"gas_parameter", r.gas_parameter},
          {"log_energy_unit", r.log_energy_unit},
          {"leading_kinetic", r.leading_kinetic},
          {"leading_interaction", r.leading_interaction},
          {"excess", r.excess},
          {"total", r.total},
          {"eps_rho", r.eps_rho},
          {"feasible", r.feasible},
          {"infeasible_reason", r.infeasible_reason},
          {"channels", channels},
          {"schedule",
           {{"R", s.R}, {"s", s.s}, {"ell", s.ell}, {"eps", s.eps}, {"delta", s.delta}, {"n", s.n}, {"m", s.m},
            {"eps1", s.eps1}, {"eps2", s.eps2}}}};
}

nlohmann::json to_json(const BoundsSweep& sweep) {
  auto fit = [](const LineFit& f) {
    return nlohmann::json{{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
                          {"slope_stderr", f.slope_stderr}};
  };
  nlohmann::json out{{"dimension", sweep.dimension},
                     {"points", sweep.rows.size()},
                     {"infeasible", sweep.infeasible},
                     {"sandwich", sweep.all_sandwiched()},
                     {"upper_fit", fit(sweep.upper_fit)},
                     {"lower_fit", fit(sweep.lower_fit)},
                     {"upper_prefactor", sweep.upper_prefactor},
                     {"lower_prefactor", sweep.lower_prefactor}};
  if (sweep.dimension == 2) {
    out["upper_log_fit"] = fit(sweep.upper_log_fit);
    out["upper_reduced_fit"] = fit(sweep.upper_reduced_fit);
    out["ratio_fit"] = fit(sweep.ratio_fit);
  }
  return out;
}

}  // namespace fermigas
