#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fermigas/fermi_box.hpp"
#include "quadrature_oracle.hpp"

using namespace fermigas;
constexpr double pi = std::numbers::pi;

// Shells of |k|^2 below 18 in 3D, listed by hand: (value, degeneracy).
static const std::vector<std::pair<int, int>> kShells3D = {
    {3, 1}, {6, 3}, {9, 3}, {11, 3}, {12, 1}, {14, 6}, {17, 3}};

TEST(FermiBox, EnergySumMatchesHandShells) {
  std::vector<std::uint64_t> expected;
  std::uint64_t sum = 0;
  for (auto [k2, deg] : kShells3D)
    for (int i = 0; i < deg; ++i) {
      sum += k2;
      expected.push_back(sum);
    }
  ASSERT_EQ(expected.size(), 20u);
  for (long n = 1; n <= 20; ++n) {
    EXPECT_EQ(dirichlet_k2_sum(n, 3), expected[n - 1]) << n;
    EXPECT_DOUBLE_EQ(dirichlet_energy_sum(n, 2.0, 3), pi * pi * expected[n - 1] / 4.0);
  }
  EXPECT_EQ(dirichlet_k2_sum(4, 3), 21u);
}

TEST(FermiBox, EnergySumMatchesBruteForce) {
  for (int d : {1, 2, 3}) {
    std::vector<int> all;
    const int K = d == 1 ? 400 : (d == 2 ? 40 : 14);
    for (int a = 1; a <= K; ++a)
      for (int b = 1; b <= (d >= 2 ? K : 1); ++b)
        for (int c = 1; c <= (d >= 3 ? K : 1); ++c)
          all.push_back(a * a + (d >= 2 ? b * b : 0) + (d >= 3 ? c * c : 0));
    std::sort(all.begin(), all.end());
    const auto prefix = dirichlet_k2_prefix(300, d);
    std::uint64_t s = 0;
    for (long n = 1; n <= 300; ++n) {
      s += all[n - 1];
      ASSERT_EQ(prefix[n - 1], s) << d << " " << n;
      if (n % 37 == 0) ASSERT_EQ(dirichlet_k2_sum(n, d), s);
    }
  }
}

TEST(FermiBox, ModeOrderingDeterministic) {
  const auto a = make_fermi_sea(50, 1.0, 3), b = make_fermi_sea(50, 1.0, 3);
  EXPECT_EQ(a.modes, b.modes);
  for (std::size_t i = 1; i < a.modes.size(); ++i) EXPECT_LE(a.eigenvalue(i - 1), a.eigenvalue(i));
  EXPECT_EQ(a.modes[1], (Mode{1, 1, 2}));
  EXPECT_EQ(a.modes[3], (Mode{2, 1, 1}));
  for (const auto& k : a.modes)
    for (int c : k) EXPECT_GE(c, 1);
}

TEST(FermiBox, ScalesAsInverseSquare) {
  EXPECT_DOUBLE_EQ(dirichlet_energy_sum(123, 3.0, 3) * 9.0, dirichlet_energy_sum(123, 1.0, 3));
}

TEST(FermiBox, ThirdPowerCorrectionExponent) {
  const auto prefix = dirichlet_k2_prefix(100000, 3);
  std::vector<double> X, Y;
  for (int i = 0; i <= 60; ++i) {
    const long n = std::lround(std::pow(10.0, 3.0 + 2.0 * i / 60));
    const double ratio = pi * pi * prefix[n - 1] / kinetic_leading(n, 1.0, 3);
    X.push_back(std::log(n));
    Y.push_back(std::log(ratio - 1.0));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= X.size();
  my /= X.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxx += (X[i] - mx) * (X[i] - mx);
    sxy += (X[i] - mx) * (Y[i] - my);
  }
  EXPECT_NEAR(sxy / sxx, -1.0 / 3.0, 0.05);
  const double n = 1e5;
  const double rel = (pi * pi * prefix[99999] - kinetic_leading(n, 1.0, 3)) /
                     (kinetic_leading(n, 1.0, 3) * std::pow(n, -1.0 / 3.0));
  EXPECT_GT(rel, 0.1);
  EXPECT_LT(rel, 10.0);
}

TEST(FermiBox, LeadingTerm) {
  const std::vector<double> one{1.0}, zero{0.0, 0.0}, two{1.0, 1.0};
  EXPECT_NEAR(fermi_leading_term(one, 3), 0.6 * std::pow(6 * pi * pi, 2.0 / 3.0), 1e-14);
  EXPECT_NEAR(fermi_leading_term(one, 3), 9.115599744691, 1e-11);
  EXPECT_EQ(fermi_leading_term(zero, 3), 0.0);
  EXPECT_NEAR(fermi_leading_term(two, 2), 4 * pi, 1e-14);
  // Dirichlet sum approaches the leading term from above
  EXPECT_GT(dirichlet_energy_sum(200000, 1.0, 3) / kinetic_leading(200000, 1.0, 3), 1.0);
  EXPECT_LT(dirichlet_energy_sum(200000, 1.0, 3) / kinetic_leading(200000, 1.0, 3), 1.03);
}

// Brute-force tensor quadrature of the squared one-particle density.
static double squared_density_quadrature(const FermiSeaSpec& spec, int nodes) {
  const auto rule = oracle::golub_welsch(nodes, 0.0, spec.ell);
  return oracle::tensor_integrate(spec.dimension, rule, [&](const double* x) {
    double rho = 0.0;
    for (const auto& k : spec.modes) {
      double v = 1.0;
      for (int a = 0; a < spec.dimension; ++a) v *= 2.0 / spec.ell * std::pow(std::sin(pi * k[a] * x[a] / spec.ell), 2);
      rho += v;
    }
    return rho * rho;
  });
}

TEST(FermiBox, DensitySquareIntegral) {
  EXPECT_NEAR(density_square_integral(1, 1.0), 27.0 / 8.0, 1e-14);
  EXPECT_NEAR(density_square_integral(1, 2.0), 27.0 / 64.0, 1e-14);
  for (long n : {1, 2, 3}) {
    const auto spec = make_fermi_sea(n, 1.3, 3);
    EXPECT_NEAR(density_square_integral(spec), squared_density_quadrature(spec, 24), 1e-8);
  }
  for (long n : {1, 4, 9}) {
    const auto spec = make_fermi_sea(n, 0.7, 2);
    EXPECT_NEAR(density_square_integral(spec), squared_density_quadrature(spec, 40), 1e-8);
  }
  double prev = 1e9;
  for (long n : {100, 1000, 10000, 100000}) {
    const double excess = density_square_integral(n, 1.0) / (double(n) * n) - 1.0;
    EXPECT_GT(excess, 0.0);
    EXPECT_LT(excess * std::cbrt(double(n)), 5.0);
    EXPECT_LT(excess, prev);
    prev = excess;
  }
}

TEST(FermiBox, OneParticleDensity) {
  const auto one = make_fermi_sea(1, 2.0, 3);
  EXPECT_NEAR(one_particle_density(one, {1.0, 1.0, 1.0}), 1.0, 1e-14);
  EXPECT_EQ(one_particle_density(one, {0.0, 0.3, 1.2}), 0.0);
  EXPECT_NEAR(one_particle_density(one, {2.0, 0.3, 1.2}), 0.0, 1e-30);
  EXPECT_THROW(one_particle_density(one, {2.1, 0.3, 1.2}), std::invalid_argument);

  const auto seven = make_fermi_sea(7, 1.5, 3);
  const auto rule = oracle::golub_welsch(16, 0.0, 1.5);
  const double total = oracle::tensor_integrate(3, rule, [&](const double* x) {
    return one_particle_density(seven, {x[0], x[1], x[2]});
  });
  EXPECT_NEAR(total, 7.0, 1e-8);
}

TEST(FermiBox, TwoParticleDensity) {
  const auto spec = make_fermi_sea(2, 1.0, 3);
  const Point x{0.2, 0.5, 0.7}, y{0.6, 0.1, 0.35};
  EXPECT_NEAR(two_particle_density(spec, x, x), 0.0, 1e-12);
  const auto px = spec.orbitals(x), py = spec.orbitals(y);
  const double det = px[0] * py[1] - px[1] * py[0];
  EXPECT_NEAR(two_particle_density(spec, x, y), det * det, 1e-12);

  // d = 1, n = 3: the density integrates to n(n - 1)
  const auto s1 = make_fermi_sea(3, 1.0, 1);
  const auto rule = oracle::golub_welsch(30, 0.0, 1.0);
  const double total = oracle::tensor_integrate(2, rule, [&](const double* z) {
    return two_particle_density(s1, {z[0], 0, 0}, {z[1], 0, 0});
  });
  EXPECT_NEAR(total, 6.0, 1e-10);
}

TEST(FermiBox, TwoParticleDensityQuadraticVanishing) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.05, 0.95), dir(-1.0, 1.0);
  double worst = 0.0;
  for (long n : {10, 50, 100, 200}) {
    const auto spec = make_fermi_sea(n, 1.0, 3);
    const double scale = std::pow(double(n), 8.0 / 3.0);
    for (int t = 0; t < 40; ++t) {
      const Point x{u(rng), u(rng), u(rng)};
      Point e{dir(rng), dir(rng), dir(rng)};
      const double en = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
      const double delta = 1e-3;
      const Point y{x[0] + delta * e[0] / en, x[1] + delta * e[1] / en, x[2] + delta * e[2] / en};
      worst = std::max(worst, two_particle_density(spec, x, y) / (delta * delta) / scale);
    }
  }
  EXPECT_LT(worst, 100.0);
}

TEST(FermiBox, GammaFilter) {
  const GammaFilter g{2.0};
  EXPECT_EQ(g(1.0), 0.0);
  EXPECT_EQ(g(2.0), 0.0);
  EXPECT_DOUBLE_EQ(g(4.0), 0.75);
}

// Cartesian momentum grid oracle: fill the cheapest cells first.
static double cartesian_bathtub(double N1, double rho, double L, int m) {
  const double kF = std::cbrt(6 * pi * pi * rho);
  const double pmax = 1.5 * kF, dp = 2 * pmax / m;
  const double per_cell = L * L * L / std::pow(2 * pi, 3) * dp * dp * dp;
  std::vector<double> costs;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double px = -pmax + (i + 0.5) * dp, py = -pmax + (j + 0.5) * dp, pz = -pmax + (k + 0.5) * dp;
        costs.push_back(std::min(px * px + py * py + pz * pz, kF * kF));
      }
  std::sort(costs.begin(), costs.end());
  double left = N1, value = 0.0;
  for (double c : costs) {
    const double take = std::min(left, per_cell);
    value += take * c;
    left -= take;
    if (left <= 0) break;
  }
  return value;
}

TEST(FermiBox, BathtubBound) {
  const double L = 3.0, rho = 2.0;
  const double N1 = 0.6 * rho * L * L * L;
  const auto rep = low_momentum_bound(N1, rho, L);
  EXPECT_DOUBLE_EQ(rep.value, 0.6 * std::pow(6 * pi * pi, 2.0 / 3.0) * std::pow(N1, 5.0 / 3.0) / (L * L));
  EXPECT_TRUE(rep.minimizer_is_ball);
  EXPECT_NEAR(rep.grid_value / rep.value, 1.0, 1e-4);
  EXPECT_NEAR(rep.grid_radius / rep.ball_radius, 1.0, 1e-4);
  EXPECT_NEAR(cartesian_bathtub(N1, rho, L, 90) / rep.value, 1.0, 5e-3);

  // N1 at the full density: the bound is the free Fermi energy of the whole box
  const auto full = low_momentum_bound(rho * L * L * L, rho, L);
  EXPECT_NEAR(full.ball_radius, full.k_F, 1e-12);
  EXPECT_NEAR(full.grid_value / kinetic_leading(rho * L * L * L, L, 3), 1.0, 1e-4);
  EXPECT_THROW(low_momentum_bound(2 * rho * L * L * L, rho, L), std::invalid_argument);
}
