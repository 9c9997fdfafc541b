#include "fermigas/fermi_box.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace fermigas {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dimension(int d, int lo = 1) {
  if (d < lo || d > 3) throw std::invalid_argument("dimension must be between " + std::to_string(lo) + " and 3");
}

// Radius guess whose octant ball holds about n lattice points.
double radius_guess(long n, int d) {
  const double nn = static_cast<double>(n);
  switch (d) {
    case 1: return nn;
    case 2: return std::sqrt(4.0 * nn / kPi) + 2.0;
    default: return std::cbrt(6.0 * nn / kPi) + 2.0;
  }
}

// hist[m] = number of positive-integer vectors with |k|^2 = m, for m <= r2.
std::vector<std::uint64_t> shell_histogram(std::int64_t r2, int d) {
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(r2) + 1, 0);
  if (d == 1) {
    for (std::int64_t k = 1; k * k <= r2; ++k) ++hist[k * k];
  } else if (d == 2) {
    for (std::int64_t a = 1; a * a + 1 <= r2; ++a)
      for (std::int64_t b = 1; a * a + b * b <= r2; ++b) ++hist[a * a + b * b];
  } else {
    for (std::int64_t a = 1; a * a + 2 <= r2; ++a)
      for (std::int64_t b = 1; a * a + b * b + 1 <= r2; ++b)
        for (std::int64_t c = 1; a * a + b * b + c * c <= r2; ++c) ++hist[a * a + b * b + c * c];
  }
  return hist;
}

std::vector<std::uint64_t> histogram_holding(long n, int d) {
  double r = radius_guess(n, d);
  for (;;) {
    const auto r2 = static_cast<std::int64_t>(std::floor(r * r));
    auto hist = shell_histogram(r2, d);
    const auto total = std::accumulate(hist.begin(), hist.end(), std::uint64_t{0});
    if (total >= static_cast<std::uint64_t>(n)) return hist;
    r *= 1.25;
  }
}

}  // namespace

double FermiSeaSpec::eigenvalue(std::size_t i) const {
  const auto& k = modes.at(i);
  const double k2 = static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
  return kPi * kPi * k2 / (ell * ell);
}

bool FermiSeaSpec::contains(const Point& x) const {
  for (int a = 0; a < dimension; ++a)
    if (x[a] < 0.0 || x[a] > ell) return false;
  return true;
}

Eigen::VectorXd FermiSeaSpec::orbitals(const Point& x) const {
  if (!contains(x)) throw std::invalid_argument("point outside the box");
  const double norm = std::pow(2.0 / ell, 0.5 * dimension);
  Eigen::VectorXd out(static_cast<Eigen::Index>(modes.size()));
  for (std::size_t i = 0; i < modes.size(); ++i) {
    double v = norm;
    for (int a = 0; a < dimension; ++a) v *= std::sin(kPi * modes[i][a] * x[a] / ell);
    out[static_cast<Eigen::Index>(i)] = v;
  }
  return out;
}

FermiSeaSpec make_fermi_sea(long n, double ell, int dimension) {
  check_dimension(dimension);
  if (n < 1) throw std::invalid_argument("make_fermi_sea: n must be >= 1");
  if (!(ell > 0.0)) throw std::invalid_argument("make_fermi_sea: box side must be positive");
  FermiSeaSpec spec;
  spec.dimension = dimension;
  spec.n = n;
  spec.ell = ell;

  double r = radius_guess(n, dimension);
  std::vector<Mode> all;
  for (;;) {
    all.clear();
    const auto r2 = static_cast<int>(std::floor(r * r));
    const int kmax = static_cast<int>(std::floor(std::sqrt(static_cast<double>(r2))));
    const int k2max = dimension >= 2 ? kmax : 1, k3max = dimension >= 3 ? kmax : 1;
    for (int a = 1; a <= kmax; ++a)
      for (int b = 1; b <= k2max; ++b)
        for (int c = 1; c <= k3max; ++c) {
          const Mode k{a, dimension >= 2 ? b : 0, dimension >= 3 ? c : 0};
          if (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] <= r2) all.push_back(k);
        }
    if (static_cast<long>(all.size()) >= n) break;
    r *= 1.25;
  }
  auto key = [](const Mode& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; };
  std::sort(all.begin(), all.end(), [&](const Mode& p, const Mode& q) {
    const int kp = key(p), kq = key(q);
    return kp != kq ? kp < kq : p < q;
  });
  all.resize(static_cast<std::size_t>(n));
  spec.modes = std::move(all);
  return spec;
}

std::vector<std::uint64_t> dirichlet_k2_prefix(long n_max, int dimension) {
  check_dimension(dimension);
  if (n_max < 1) throw std::invalid_argument("dirichlet_k2_prefix: n must be >= 1");
  const auto hist = histogram_holding(n_max, dimension);
  std::vector<std::uint64_t> prefix;
  prefix.reserve(static_cast<std::size_t>(n_max));
  std::uint64_t sum = 0;
  for (std::size_t m = 0; m < hist.size() && static_cast<long>(prefix.size()) < n_max; ++m) {
    for (std::uint64_t c = 0; c < hist[m] && static_cast<long>(prefix.size()) < n_max; ++c) {
      sum += m;
      prefix.push_back(sum);
    }
  }
  return prefix;
}

std::uint64_t dirichlet_k2_sum(long n, int dimension) {
  check_dimension(dimension);
  if (n < 1) throw std::invalid_argument("dirichlet_energy_sum: n must be >= 1");
  if (n > 100'000'000) throw std::invalid_argument("dirichlet_energy_sum: n above 1e8 not supported");
  const auto hist = histogram_holding(n, dimension);
  std::uint64_t sum = 0;
  std::uint64_t remaining = static_cast<std::uint64_t>(n);
  for (std::size_t m = 0; m < hist.size() && remaining > 0; ++m) {
    const std::uint64_t take = std::min(remaining, hist[m]);
    sum += take * m;
    remaining -= take;
  }
  return sum;
}

double dirichlet_energy_sum(long n, double ell, int dimension) {
  if (!(ell > 0.0)) throw std::invalid_argument("dirichlet_energy_sum: box side must be positive");
  return kPi * kPi * static_cast<double>(dirichlet_k2_sum(n, dimension)) / (ell * ell);
}

double kinetic_leading(double n, double ell, int dimension) {
  switch (dimension) {
    case 3: return 0.6 * std::pow(6.0 * kPi * kPi, 2.0 / 3.0) * std::pow(n, 5.0 / 3.0) / (ell * ell);
    case 2: return 2.0 * kPi * n * n / (ell * ell);
    case 1: return kPi * kPi * n * n * n / (3.0 * ell * ell);
    default: throw std::invalid_argument("kinetic_leading: dimension must be 1, 2 or 3");
  }
}

double fermi_leading_term(std::span<const double> densities, int dimension) {
  check_dimension(dimension, 2);
  double sum = 0.0;
  for (double rho : densities) {
    if (rho < 0.0) throw std::invalid_argument("fermi_leading_term: densities must be >= 0");
    sum += dimension == 3 ? std::pow(rho, 5.0 / 3.0) : rho * rho;
  }
  return dimension == 3 ? 0.6 * std::pow(6.0 * kPi * kPi, 2.0 / 3.0) * sum : 2.0 * kPi * sum;
}

double density_square_integral(const FermiSeaSpec& spec) {
  const int d = spec.dimension;
  long double total = 0.0L;
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    counts.reserve(spec.modes.size());
    for (const auto& k : spec.modes) {
      std::uint64_t key = 0;
      for (int a = 0; a < d; ++a)
        key = (key << 21) | (mask & (1 << a) ? static_cast<std::uint64_t>(k[a]) : 0u);
      ++counts[key];
    }
    long double s = 0.0L;
    for (const auto& [key, c] : counts) s += static_cast<long double>(c) * static_cast<long double>(c);
    total += std::pow(0.5L, std::popcount(static_cast<unsigned>(mask))) * s;
  }
  return static_cast<double>(total / std::pow(static_cast<long double>(spec.ell), d));
}

double density_square_integral(long n, double ell, int dimension) {
  return density_square_integral(make_fermi_sea(n, ell, dimension));
}

double one_particle_density(const FermiSeaSpec& spec, const Point& x) {
  return spec.orbitals(x).squaredNorm();
}

double mode_kernel(const FermiSeaSpec& spec, const Point& x, const Point& y) {
  return spec.orbitals(x).dot(spec.orbitals(y));
}

double two_particle_density(const FermiSeaSpec& spec, const Point& x, const Point& y) {
  const auto px = spec.orbitals(x), py = spec.orbitals(y);
  const double k = px.dot(py);
  return px.squaredNorm() * py.squaredNorm() - k * k;
}

double GammaFilter::operator()(double p) const {
  if (p <= k_F) return 0.0;
  return std::max(1.0 - k_F * k_F / (p * p), 0.0);
}

BathtubReport low_momentum_bound(double N1, double rho, double L, int grid_shells) {
  if (N1 < 0.0 || !(L > 0.0) || !(rho > 0.0))
    throw std::invalid_argument("low_momentum_bound: need N1 >= 0, rho > 0, L > 0");
  if (N1 / (L * L * L) > rho * (1.0 + 1e-12))
    throw std::invalid_argument("low_momentum_bound: requires N1 / L^3 <= rho");
  BathtubReport rep;
  rep.k_F = std::cbrt(6.0 * kPi * kPi * rho);
  rep.ball_radius = std::cbrt(6.0 * kPi * kPi * N1 / (L * L * L));
  rep.value = kinetic_leading(N1, L, 3);

  // Radial shells on [0, 2 k_F]; occupation per shell is capacity * fraction.
  const GammaFilter gamma{rep.k_F};
  const double pmax = 2.0 * rep.k_F;
  const double phase = L * L * L / std::pow(2.0 * kPi, 3);
  struct Shell {
    double lo, hi, capacity, cost;
  };
  std::vector<Shell> shells(static_cast<std::size_t>(grid_shells));
  for (int i = 0; i < grid_shells; ++i) {
    const double a = pmax * i / grid_shells, b = pmax * (i + 1) / grid_shells;
    const double vol = 4.0 * kPi / 3.0 * (b * b * b - a * a * a);
    // shell average of p^2 (1 - Gamma(p)), exact for the piecewise form
    double cost;
    if (b <= rep.k_F) {
      cost = 0.6 * (std::pow(b, 5) - std::pow(a, 5)) / (b * b * b - a * a * a);
    } else if (a >= rep.k_F) {
      const double mid = 0.5 * (a + b);
      cost = mid * mid * (1.0 - gamma(mid));
    } else {
      const double k = rep.k_F;
      cost = (0.6 * (std::pow(k, 5) - std::pow(a, 5)) + k * k * (b * b * b - k * k * k)) /
             (b * b * b - a * a * a);
    }
    shells[static_cast<std::size_t>(i)] = {a, b, phase * vol, cost};
  }
  std::vector<std::size_t> order(shells.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return shells[i].cost < shells[j].cost; });
  double remaining = N1, value = 0.0;
  std::vector<double> fill(shells.size(), 0.0);
  for (std::size_t idx : order) {
    if (remaining <= 0.0) break;
    const double take = std::min(remaining, shells[idx].capacity);
    fill[idx] = take / shells[idx].capacity;
    value += take * shells[idx].cost;
    remaining -= take;
  }
  if (remaining > 1e-9 * std::max(1.0, N1))
    throw std::runtime_error("low_momentum_bound: grid too small to hold N1 particles");
  rep.grid_value = value;

  // the occupied set must be a prefix in |p|: full shells, then one partial, then empty
  bool ball = true;
  std::size_t last = 0;
  for (std::size_t i = 0; i < fill.size(); ++i)
    if (fill[i] > 0.0) last = i;
  for (std::size_t i = 0; i < last; ++i)
    if (fill[i] < 1.0 - 1e-12) ball = false;
  rep.minimizer_is_ball = ball;
  const Shell& s = shells[last];
  rep.grid_radius = std::cbrt(s.lo * s.lo * s.lo + fill[last] * (s.hi * s.hi * s.hi - s.lo * s.lo * s.lo));
  return rep;
}

}  // namespace fermigas
