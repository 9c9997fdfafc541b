#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "fermigas/potential.hpp"
#include "fermigas/soft_potential.hpp"
#include "fermigas/types.hpp"

namespace fermigas {

/// Smooth compactly supported test function
///   psi(x) = B(x) G(x) M(x) prod_i C(|x - y_i|)
/// with B a bump of radius bump_radius, G a Gaussian, M = 1 + beta cos(k.x + phase)
/// and C(r) = [1 - core_depth (1 - step((r - core_start) / core_width))] [1 - tail r_c / sqrt(r^2 + e^2)],
/// r_c = core_start, e = core_width / 2. A depth of 1 makes psi vanish on |x - y_i| <= core_start;
/// the second factor mimics the 1 - a/r shape of a scattering solution.
struct TestFunction {
  int dimension = 3;
  std::vector<Point> centres{Point{0.0, 0.0, 0.0}};
  double core_start = 0.0;
  double core_width = 0.5;
  double core_depth = 1.0;
  double tail = 0.0;
  Point bump_centre{0.0, 0.0, 0.0};
  double bump_radius = 3.0;
  Point gauss_centre{0.0, 0.0, 0.0};
  double gauss_width = 1.0;
  double modulation = 0.0;
  Point wave{0.0, 0.0, 0.0};
  double phase = 0.0;

  [[nodiscard]] double value(const Point& x) const;
  /// Returns psi(x) and writes its gradient.
  double value_and_gradient(const Point& x, Point& gradient) const;
};

/// Quadrature settings for one evaluation of the Dyson terms.
struct DysonResolution {
  int order = 8;               // Gauss-Legendre points per spatial panel
  double fine_panel = 0.25;    // radial panel width in the core shell, in units of core_width
  double coarse_panel = 0.6;   // radial panel width elsewhere, absolute
  double grid_fine = 0.5;      // tensor-grid panel width near the cores, in units of core_width
  double grid_floor = 0.1;     // lower bound on the tensor-grid panel width near the cores
  double grid_coarse = 1.0;    // tensor-grid panel width elsewhere, absolute
  int grid_order = 6;
  int polar = 16;
  int azimuth = 32;
  int momentum_panels = 4;     // per axis of [-2/s, 2/s]
  int momentum_order = 8;
  int chebyshev = 12;          // interpolation grid for the low-momentum part on the ball

  static DysonResolution coarse();
  static DysonResolution fine();
};

/// Pieces of the inequality for one test function.
///   kinetic:   single centre, integral over |x| <= R of |grad xi|^2;
///              field form, integral over all space of |grad xi|^2
///   potential: 1/2 sum_i integral v(x - y_i) |psi|^2 (zero for a hard core)
///   u_term:    sum_i integral U(x - y_i) |psi|^2
///   w_term:    sum_i integral w_R(x - y_i) |psi|^2
/// with xi the high-momentum part of psi, hat xi = chi hat psi.
struct DysonTerms {
  double kinetic = 0.0;
  double potential = 0.0;
  double u_term = 0.0;
  double w_term = 0.0;

  [[nodiscard]] double lhs() const { return kinetic + potential; }
  /// (1 - eps) c_U u_term - (c_w / eps) w_term.
  [[nodiscard]] double rhs(const SoftPotentialKit& kit, double eps) const;
  [[nodiscard]] double gap(const SoftPotentialKit& kit, double eps) const { return lhs() - rhs(kit, eps); }
};

/// Single-centre form needs psi.centres = {0}; the field form needs centres at
/// mutual distance >= 2R. Throws std::invalid_argument if psi does not vanish
/// on a hard core or the geometry is invalid.
DysonTerms dyson_terms(const TestFunction& psi, const RadialPotential& v, const SoftPotentialKit& kit,
                       const DysonResolution& resolution, bool field_form = false);

/// Part of psi below the momentum cutoff, P = psi - xi, with its gradient:
/// {P, dP/dx, dP/dy, dP/dz} at points inside [-R, R]^d.
std::vector<std::array<double, 4>> low_momentum_part(const TestFunction& psi, const SoftPotentialKit& kit,
                                                     std::span<const Point> points,
                                                     const DysonResolution& resolution = DysonResolution::fine());

struct DysonGap {
  double gap = 0.0;  // fine resolution
  double eta = 0.0;  // |fine - coarse|
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Terms at both resolutions, reusable for several eps.
struct DysonEvaluation {
  DysonTerms coarse;
  DysonTerms fine;

  [[nodiscard]] DysonGap gap(const SoftPotentialKit& kit, double eps) const;
};

DysonEvaluation evaluate_dyson(const TestFunction& psi, const RadialPotential& v, const SoftPotentialKit& kit,
                               bool field_form = false);

/// LHS minus RHS of the cut-off Dyson inequality for one test function, eps in (0, 1].
DysonGap dyson_gap(const TestFunction& psi, const RadialPotential& v, const SoftPotentialKit& kit, double eps);
/// Same for the many-centre field form, centres taken from psi.centres.
DysonGap dyson_field_gap(const TestFunction& psi, const RadialPotential& v, const SoftPotentialKit& kit,
                         double eps);

/// Seeded random test functions adapted to the potential: the core factor
/// vanishes on a hard core; for soft potentials its depth is random.
/// `centres` > 1 places that many centres on the first axis at spacing in [2R, 2.4R].
std::vector<TestFunction> dyson_corpus(std::size_t count, int dimension, const RadialPotential& v, double R,
                                       unsigned long long seed, std::size_t centres = 1);

struct DysonCorpusReport {
  std::size_t count = 0;
  double eps = 0.0;
  double min_gap = 0.0;
  double min_relative_gap = 0.0;  // min over psi of gap / lhs
  double max_eta = 0.0;
  double max_relative_eta = 0.0;
  std::size_t violations = 0;  // gap < -tolerance * lhs
};

/// Evaluates every test function once and reports per eps.
std::vector<DysonCorpusReport> run_dyson_corpus(std::span<const TestFunction> corpus, const RadialPotential& v,
                                                const SoftPotentialKit& kit, std::span<const double> eps_values,
                                                bool field_form = false, double tolerance = 1e-6);

}  // namespace fermigas
