#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "fermigas/fermi_box.hpp"
#include "fermigas/scattering.hpp"
#include "fermigas/twobody.hpp"
#include "quadrature_oracle.hpp"

using namespace fermigas;
constexpr double pi = std::numbers::pi;

namespace {

double mode(int n, double x, double ell) { return std::sqrt(2.0 / ell) * std::sin(n * pi * x / ell); }

// int phi_n phi_n2 (x) phi_m phi_m2 (x - t) dx over the overlap of the two boxes.
double axis_factor(int n, int n2, int m, int m2, double t, double ell) {
  const double lo = std::max(0.0, t), hi = std::min(ell, ell + t);
  if (hi <= lo) return 0.0;
  static const auto ref = oracle::golub_welsch(16, -1.0, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < ref.x.size(); ++i) {
    const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * ref.x[i];
    s += ref.w[i] * mode(n, x, ell) * mode(n2, x, ell) * mode(m, x - t, ell) * mode(m2, x - t, ell);
  }
  return 0.5 * (hi - lo) * s;
}

// Lowest eigenvalue of the cutoff-2 Hamiltonian, matrix elements by plain quadrature over the
// full ball of relative positions (no symmetry folding, no closed forms).
double brute_force_cutoff2(const RadialPotential& v, double ell, int d) {
  struct State {
    std::array<int, 3> n{1, 1, 1}, m{1, 1, 1};
  };
  std::vector<State> states;
  const int total = 1 << (2 * d);
  for (int code = 0; code < total; ++code) {
    State s;
    bool even = true;
    for (int i = 0; i < d; ++i) {
      s.n[i] = 1 + ((code >> (2 * i)) & 1);
      s.m[i] = 1 + ((code >> (2 * i + 1)) & 1);
      even = even && (s.n[i] + s.m[i]) % 2 == 0;
    }
    if (even) states.push_back(s);
  }

  std::vector<std::array<double, 4>> nodes;  // r_x, r_y, r_z, weight * v
  const auto radial = oracle::golub_welsch(20, 0.0, v.range());
  const int n_phi = 64;
  const auto polar = oracle::golub_welsch(20, 0.0, pi);
  for (std::size_t i = 0; i < radial.x.size(); ++i) {
    const double r = radial.x[i];
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * pi * j / n_phi, wphi = 2.0 * pi / n_phi;
      if (d == 2) {
        nodes.push_back({r * std::cos(phi), r * std::sin(phi), 0.0, radial.w[i] * wphi * r * v(r)});
        continue;
      }
      for (std::size_t t = 0; t < polar.x.size(); ++t) {
        const double th = polar.x[t];
        nodes.push_back({r * std::sin(th) * std::cos(phi), r * std::sin(th) * std::sin(phi), r * std::cos(th),
                         radial.w[i] * wphi * polar.w[t] * r * r * std::sin(th) * v(r)});
      }
    }
  }

  const auto N = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index a = 0; a < N; ++a)
    for (Eigen::Index b = 0; b < N; ++b) {
      double sum = 0.0;
      for (const auto& node : nodes) {
        double f = node[3];
        for (int i = 0; i < d; ++i)
          f *= axis_factor(states[a].n[i], states[b].n[i], states[a].m[i], states[b].m[i], node[i], ell);
        sum += f;
      }
      H(a, b) = sum;
      if (a == b)
        for (int i = 0; i < d; ++i)
          H(a, a) += pi * pi * (states[a].n[i] * states[a].n[i] + states[a].m[i] * states[a].m[i]) / (ell * ell);
    }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

double ratio(const TwoBodyResult& r, double a) { return r.shift() / (pi * a); }

}  // namespace

TEST(TwoBody, FreeGroundStateIsExactAtEveryCutoff) {
  for (int d : {2, 3})
    for (double ell : {1.0, 2.5}) {
      const auto r = ground_state_energy({RadialPotential::zero(0.2), ell, 4, d});
      ASSERT_EQ(r.trace.size(), 3u);
      for (const auto& e : r.trace) EXPECT_NEAR(e.energy, 2.0 * d * pi * pi / (ell * ell), 1e-12) << d;
      EXPECT_DOUBLE_EQ(r.free_energy, free_two_body_energy(ell, d));
      EXPECT_TRUE(r.converged);
    }
}

TEST(TwoBody, TraceIsMonotoneAndSizesGrow) {
  const auto v = RadialPotential::square_barrier(200.0, 0.15);
  for (int d : {2, 3}) {
    const auto r = ground_state_energy({v, 1.0, d == 2 ? 9 : 5, d});
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      EXPECT_LE(r.trace[i].energy, r.trace[i - 1].energy + 1e-10) << d << " " << i;
      EXPECT_GT(r.trace[i].basis_size, r.trace[i - 1].basis_size);
    }
  }
}

TEST(TwoBody, BasisSizesMatchEvenSector) {
  const auto r = ground_state_energy({RadialPotential::square_barrier(1.0, 0.1), 1.0, 5, 3});
  const std::vector<std::size_t> expected{8, 125, 512, 2197};
  ASSERT_EQ(r.trace.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(r.trace[i].basis_size, expected[i]);
}

TEST(TwoBody, CutoffTwoMatchesBruteForceQuadrature) {
  const auto v = RadialPotential::linear_ramp(80.0, 0.25);
  for (int d : {2, 3}) {
    const double expected = brute_force_cutoff2(v, 1.3, d);
    const auto r = ground_state_energy({v, 1.3, 2, d});
    EXPECT_NEAR(r.trace.front().energy, expected, 1e-9 * expected) << d;
  }
}

TEST(TwoBody, WeakBarrierShiftMatchesPseudopotential) {
  const auto v = tune_scattering_length(RadialPotential::square_barrier(1.0, 0.1), 0.01);
  EXPECT_NEAR(solve_zero_energy(v, 3).a, 0.01, 1e-10);
  const auto r = ground_state_energy({v, 1.0, 5, 3});
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.relative_change, 1e-3);
  EXPECT_GT(ratio(r, 0.01), 27.0 * 0.9);
  EXPECT_LT(ratio(r, 0.01), 27.0 * 1.1);
}

TEST(TwoBody, ShiftIsUniversalAcrossShapes) {
  const double a = 0.005;
  const std::vector<RadialPotential> shapes{RadialPotential::square_barrier(1.0, 0.1),
                                            RadialPotential::linear_ramp(1.0, 0.1),
                                            RadialPotential::double_step(2.0, 0.5, 0.05, 0.1)};
  std::vector<double> ratios;
  for (const auto& shape : shapes) {
    const auto r = ground_state_energy({tune_scattering_length(shape, a), 1.0, 4, 3});
    EXPECT_TRUE(r.converged);
    ratios.push_back(ratio(r, a));
    EXPECT_GT(ratios.back(), 27.0 * 0.9) << shape.label();
    EXPECT_LT(ratios.back(), 27.0 * 1.1) << shape.label();
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  EXPECT_LT(*hi / *lo - 1.0, 0.05);
}

TEST(TwoBody, ShiftIsPositiveForRepulsion) {
  for (int d : {2, 3}) {
    const auto r = ground_state_energy({RadialPotential::double_step(50.0, 5.0, 0.05, 0.2), 1.0, 3, d});
    EXPECT_GT(r.shift(), 0.0) << d;
  }
}

TEST(TwoBody, PredictionUsesFourthMomentOfGroundMode) {
  for (double ell : {1.0, 1.7}) {
    const auto rule = oracle::composite_gl(4, 12, 0.0, ell);
    const double quartic = oracle::tensor_integrate(3, rule, [&](const double* x) {
      double p = 1.0;
      for (int i = 0; i < 3; ++i) p *= std::pow(mode(1, x[i], ell), 4);
      return p;
    });
    EXPECT_NEAR(quartic, 27.0 / (8.0 * std::pow(ell, 3)), 1e-12);
    EXPECT_NEAR(quartic, density_square_integral(1, ell, 3), 1e-12);
    const double a = 0.003;
    EXPECT_NEAR(pseudopotential_prediction(a, ell, 3) - free_two_body_energy(ell, 3), 8.0 * pi * a * quartic,
                1e-12);
  }
}

TEST(TwoBody, PredictionLimitsAndScaling) {
  EXPECT_DOUBLE_EQ(pseudopotential_prediction(0.0, 1.5, 3), free_two_body_energy(1.5, 3));
  EXPECT_DOUBLE_EQ(pseudopotential_prediction(0.0, 1.5, 2), free_two_body_energy(1.5, 2));
  const double a = 1e-3;
  const double s1 = pseudopotential_prediction(a, 1.0, 3) - free_two_body_energy(1.0, 3);
  const double s2 = pseudopotential_prediction(a, 2.0, 3) - free_two_body_energy(2.0, 3);
  EXPECT_NEAR(s1 / s2, 8.0, 1e-12);
  EXPECT_NEAR(s1, 27.0 * pi * a, 1e-13);
  const double shift2d = pseudopotential_prediction(a, 1.0, 2) - free_two_body_energy(1.0, 2);
  EXPECT_NEAR(shift2d, 8.0 * pi / std::abs(std::log(2.0 * a * a)) * 2.25, 1e-12);
  EXPECT_THROW(pseudopotential_prediction(-1.0, 1.0, 3), std::invalid_argument);
}

TEST(TwoBody, RejectsInvalidProblems) {
  EXPECT_THROW(ground_state_energy({RadialPotential::hard_sphere(0.05), 1.0, 3, 3}), std::invalid_argument);
  EXPECT_THROW(ground_state_energy({RadialPotential::hard_core_shoulder(0.02, 5.0, 0.1), 1.0, 3, 3}),
               std::invalid_argument);
  EXPECT_THROW(ground_state_energy({RadialPotential::square_barrier(1.0, 0.1), 1.0, 1, 3}), std::invalid_argument);
  EXPECT_THROW(ground_state_energy({RadialPotential::square_barrier(1.0, 1.2), 1.0, 3, 3}), std::invalid_argument);
  EXPECT_THROW(ground_state_energy({RadialPotential::square_barrier(1.0, 0.1), 1.0, 3, 4}), std::invalid_argument);
  EXPECT_THROW(ground_state_energy({RadialPotential::square_barrier(1.0, 0.1), 1.0, 9, 3}), std::invalid_argument);
  EXPECT_THROW(tune_scattering_length(RadialPotential::hard_sphere(0.1), 0.01), std::invalid_argument);
}

TEST(TwoBody, ReportSerialises) {
  const auto r = ground_state_energy({RadialPotential::square_barrier(10.0, 0.1), 1.0, 3, 3});
  const auto j = to_json(r);
  EXPECT_EQ(j["trace"].size(), 2u);
  EXPECT_DOUBLE_EQ(j["shift"].get<double>(), r.shift());
  EXPECT_EQ(j["converged"].get<bool>(), r.converged);
}
