#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fermigas/dyson.hpp"
#include "fermigas/scattering.hpp"
#include "quadrature_oracle.hpp"

using namespace fermigas;

namespace {

constexpr double kR0 = 0.5;
constexpr double kR = 1.5;
constexpr double kS = 3.0;

SoftPotentialKit make_kit(int d, const RadialPotential& v, MomentumCutoff cut = MomentumCutoff{kS}) {
  return SoftPotentialKit(d, cut, kR, kR0, solve_zero_energy(v, d).a);
}

TestFunction smooth_psi(int d) {
  TestFunction psi;
  psi.dimension = d;
  psi.core_start = 0.0;
  psi.core_depth = 0.0;
  psi.bump_radius = 2.5;
  psi.bump_centre = {0.2, -0.1, d == 3 ? 0.15 : 0.0};
  psi.gauss_width = 1.1;
  psi.modulation = 0.3;
  psi.wave = {0.8, 0.5, d == 3 ? -0.4 : 0.0};
  psi.phase = 0.3;
  return psi;
}

TestFunction cored_psi(int d) {
  TestFunction psi = smooth_psi(d);
  psi.core_start = kR0;
  psi.core_width = 0.4;
  psi.core_depth = 1.0;
  psi.tail = 0.5;
  return psi;
}

// P(x) = (2 pi)^(-d/2) integral h(|x - y|) psi(y) dy and its gradient, by brute force over the bump's box.
std::array<double, 4> convolve(const TestFunction& psi, const CutoffKernel& k, const Point& x, int panels) {
  const int d = psi.dimension;
  const oracle::Rule1D r = oracle::composite_gl(panels, 8, -psi.bump_radius, psi.bump_radius);
  std::array<double, 4> out{0.0, 0.0, 0.0, 0.0};
  const std::size_t m = r.x.size();
  const std::size_t m3 = d == 3 ? m : 1;
  for (std::size_t c = 0; c < m3; ++c)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t a = 0; a < m; ++a) {
        const Point y{psi.bump_centre[0] + r.x[a], psi.bump_centre[1] + r.x[b],
                      d == 3 ? psi.bump_centre[2] + r.x[c] : 0.0};
        const double w = r.w[a] * r.w[b] * (d == 3 ? r.w[c] : 1.0);
        const double p = psi.value(y);
        if (p == 0.0) continue;
        const Point e{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
        const double dist = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
        out[0] += w * k.h(dist) * p;
        if (dist > 0.0)
          for (int i = 0; i < 3; ++i) out[1 + i] += w * k.dh(dist) * e[i] / dist * p;
      }
  for (double& o : out) o *= std::pow(2 * M_PI, -0.5 * d);
  return out;
}

}  // namespace

TEST(Dyson, GradientMatchesDifferences) {
  for (int d : {3, 2}) {
    TestFunction psi = cored_psi(d);
    psi.centres = {Point{0.0, 0.0, 0.0}, Point{3.1, 0.2, 0.0}};
    for (const Point& x : {Point{0.7, 0.3, d == 3 ? -0.2 : 0.0}, Point{2.5, -0.4, d == 3 ? 0.3 : 0.0},
                           Point{-0.9, 1.1, d == 3 ? 0.5 : 0.0}}) {
      Point g;
      const double v = psi.value_and_gradient(x, g);
      EXPECT_DOUBLE_EQ(v, psi.value(x));
      const double h = 1e-6;
      for (int i = 0; i < d; ++i) {
        Point xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        EXPECT_NEAR(g[i], (psi.value(xp) - psi.value(xm)) / (2 * h), 1e-6 * (1 + std::abs(g[i])));
      }
    }
  }
}

TEST(Dyson, CoreVanishes) {
  const TestFunction psi = cored_psi(3);
  EXPECT_EQ(psi.value({0.3, 0.2, 0.1}), 0.0);
  EXPECT_NE(psi.value({1.0, 0.2, 0.1}), 0.0);
}

TEST(Dyson, LowMomentumPartMatchesConvolution2D) {
  const auto v = RadialPotential::hard_sphere(kR0);
  const SoftPotentialKit kit = make_kit(2, v);
  DysonResolution res = DysonResolution::fine();
  res.grid_fine *= 0.5;
  res.grid_floor *= 0.5;
  res.grid_coarse *= 0.5;
  for (const TestFunction& psi : {smooth_psi(2), cored_psi(2)}) {
    const std::vector<Point> pts{{0.0, 0.0, 0.0}, {0.6, -0.3, 0.0}, {-1.2, 0.9, 0.0}, {1.45, 1.45, 0.0}};
    const auto got = low_momentum_part(psi, kit, pts, res);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto ref = convolve(psi, kit.kernel(), pts[i], 40);
      const double scale = std::abs(ref[0]) + std::abs(ref[1]) + std::abs(ref[2]);
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(got[i][c], ref[c], 3e-5 * scale) << i << " " << c;
    }
  }
}

TEST(Dyson, LowMomentumPartMatchesConvolution3D) {
  const auto v = RadialPotential::hard_sphere(kR0);
  const SoftPotentialKit kit = make_kit(3, v);
  const TestFunction psi = smooth_psi(3);
  const std::vector<Point> pts{{0.4, -0.2, 0.3}, {-1.0, 0.7, -1.1}};
  const auto got = low_momentum_part(psi, kit, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto ref = convolve(psi, kit.kernel(), pts[i], 12);
    const double scale = std::abs(ref[0]) + std::abs(ref[1]) + std::abs(ref[2]) + std::abs(ref[3]);
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(got[i][c], ref[c], 3e-5 * scale) << i << " " << c;
  }
}

TEST(Dyson, LowMomentumPartRejectsFarPoints) {
  const auto v = RadialPotential::hard_sphere(kR0);
  const SoftPotentialKit kit = make_kit(2, v);
  const std::vector<Point> pts{{2.0, 0.0, 0.0}};
  EXPECT_THROW(low_momentum_part(smooth_psi(2), kit, pts), std::invalid_argument);
}

TEST(Dyson, IdentityCutoffKineticIsBallIntegral) {
  const auto v = RadialPotential::hard_sphere(kR0);
  const SoftPotentialKit kit = make_kit(2, v, MomentumCutoff::none());
  const TestFunction psi = cored_psi(2);
  const DysonTerms t = dyson_terms(psi, v, kit, DysonResolution::fine());
  // Polar integral of |grad psi|^2 over the disc of radius R.
  const auto radial = oracle::composite_gl(60, 8, 0.0, kR);
  const auto angle = oracle::composite_gl(16, 8, 0.0, 2 * M_PI);
  double ref = 0.0;
  for (std::size_t i = 0; i < radial.x.size(); ++i)
    for (std::size_t j = 0; j < angle.x.size(); ++j) {
      const double r = radial.x[i];
      Point g;
      psi.value_and_gradient({r * std::cos(angle.x[j]), r * std::sin(angle.x[j]), 0.0}, g);
      ref += radial.w[i] * angle.w[j] * r * (g[0] * g[0] + g[1] * g[1]);
    }
  EXPECT_NEAR(t.kinetic, ref, 1e-6 * ref);
  EXPECT_EQ(t.potential, 0.0);
}

TEST(Dyson, GapIsLhsMinusRhs) {
  const auto v = RadialPotential::square_barrier(40.0, kR0);
  const SoftPotentialKit kit = make_kit(3, v);
  TestFunction psi = cored_psi(3);
  psi.core_depth = 0.6;
  const DysonEvaluation e = evaluate_dyson(psi, v, kit);
  for (double eps : {0.1, 0.5, 1.0}) {
    const DysonGap g = e.gap(kit, eps);
    const double rhs = (1 - eps) * kit.u_coefficient() * e.fine.u_term - kit.w_coefficient() / eps * e.fine.w_term;
    EXPECT_NEAR(g.rhs, rhs, 1e-12 * (1 + std::abs(rhs)));
    EXPECT_NEAR(g.gap, g.lhs - g.rhs, 1e-12 * (1 + std::abs(g.lhs)));
    EXPECT_GT(e.fine.potential, 0.0);
  }
  EXPECT_THROW((void)e.fine.rhs(kit, 0.0), std::invalid_argument);
  EXPECT_THROW((void)e.fine.rhs(kit, 1.5), std::invalid_argument);
  EXPECT_THROW(dyson_gap(psi, v, kit, -0.1), std::invalid_argument);
}

TEST(Dyson, RejectsInvalidGeometry) {
  const auto v = RadialPotential::hard_sphere(kR0);
  const SoftPotentialKit kit = make_kit(3, v);
  TestFunction psi = cored_psi(3);
  psi.core_start = 0.4;
  EXPECT_THROW(dyson_gap(psi, v, kit, 0.5), std::invalid_argument);
  psi = cored_psi(3);
  psi.core_depth = 0.9;
  EXPECT_THROW(dyson_gap(psi, v, kit, 0.5), std::invalid_argument);
  psi = cored_psi(3);
  psi.dimension = 2;
  EXPECT_THROW(dyson_gap(psi, v, kit, 0.5), std::invalid_argument);
  psi = cored_psi(3);
  psi.centres = {Point{0.0, 0.0, 0.0}, Point{2.0, 0.0, 0.0}};
  EXPECT_THROW(dyson_field_gap(psi, v, kit, 0.5), std::invalid_argument);
  psi.centres = {Point{0.5, 0.0, 0.0}};
  EXPECT_THROW(dyson_gap(psi, v, kit, 0.5), std::invalid_argument);
}

TEST(Dyson, CorpusIsDeterministic) {
  const auto v = RadialPotential::square_barrier(40.0, kR0);
  const auto a = dyson_corpus(6, 3, v, kR, 7, 2);
  const auto b = dyson_corpus(6, 3, v, kR, 7, 2);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].centres.size(), 2u);
    EXPECT_EQ(a[i].core_width, b[i].core_width);
    EXPECT_EQ(a[i].gauss_width, b[i].gauss_width);
    EXPECT_EQ(a[i].centres[1][0], b[i].centres[1][0]);
  }
  const SoftPotentialKit kit = make_kit(3, v);
  const double eps[] = {0.5};
  const auto r1 = run_dyson_corpus(std::span(a).first(2), v, kit, eps, true);
  const auto r2 = run_dyson_corpus(std::span(b).first(2), v, kit, eps, true);
  EXPECT_EQ(r1[0].min_gap, r2[0].min_gap);
}

struct CorpusCase {
  int dimension;
  bool barrier;
  bool field;
  bool identity;
  std::size_t count;
};

class DysonCorpus : public ::testing::TestWithParam<CorpusCase> {};

TEST_P(DysonCorpus, GapIsPositive) {
  const CorpusCase c = GetParam();
  const auto v = c.barrier ? RadialPotential::square_barrier(40.0, kR0) : RadialPotential::hard_sphere(kR0);
  const SoftPotentialKit kit = make_kit(c.dimension, v, c.identity ? MomentumCutoff::none() : MomentumCutoff{kS});
  const std::size_t centres = c.field ? (c.dimension == 3 ? 2 : 3) : 1;
  const auto corpus = dyson_corpus(c.count, c.dimension, v, kR, 42, centres);
  const double eps[] = {0.1, 0.5};
  for (const DysonCorpusReport& r : run_dyson_corpus(corpus, v, kit, eps, c.field)) {
    EXPECT_EQ(r.count, c.count);
    EXPECT_EQ(r.violations, 0u) << r.eps;
    EXPECT_GT(r.min_gap, 0.0) << r.eps;
    EXPECT_LT(r.max_relative_eta, 1e-2) << r.eps;
    if (c.identity) EXPECT_LT(r.min_relative_gap, 0.9) << r.eps;
  }
}

INSTANTIATE_TEST_SUITE_P(Corpora, DysonCorpus,
                         ::testing::Values(CorpusCase{3, false, false, false, 6}, CorpusCase{3, true, false, false, 6},
                                           CorpusCase{3, false, true, false, 3}, CorpusCase{3, true, true, false, 3},
                                           CorpusCase{3, false, false, true, 6}, CorpusCase{3, true, false, true, 6},
                                           CorpusCase{2, false, false, false, 30}, CorpusCase{2, true, false, false, 30},
                                           CorpusCase{2, false, true, false, 20}, CorpusCase{2, true, true, false, 20},
                                           CorpusCase{2, false, false, true, 30}, CorpusCase{2, true, false, true, 30}),
                         [](const auto& info) {
                           const CorpusCase& c = info.param;
                           return std::string(c.dimension == 3 ? "D3" : "D2") + (c.barrier ? "Barrier" : "HardSphere") +
                                  (c.field ? "Field" : "") + (c.identity ? "NoCutoff" : "");
                         });
