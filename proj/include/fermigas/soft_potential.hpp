#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "fermigas/fit.hpp"
#include "fermigas/types.hpp"

namespace fermigas {

/// chi_s(p) = l(s p), with l a smooth ramp from 0 at |p| = 1 to 1 at |p| = 2.
/// An infinite s stands for chi identically 1.
struct MomentumCutoff {
  double s = 1.0;

  static double l(double p);
  [[nodiscard]] double chi(double p) const;
  [[nodiscard]] double one_minus_chi(double p) const { return 1.0 - chi(p); }
  [[nodiscard]] bool is_identity() const { return s == std::numeric_limits<double>::infinity(); }
  /// Momentum beyond which chi is 1.
  [[nodiscard]] double support() const { return is_identity() ? 0.0 : 2.0 / s; }

  static MomentumCutoff none() { return {std::numeric_limits<double>::infinity()}; }
};

/// |h(r)| <= amplitude * s^-d * exp(-rate * sqrt(r / s)) for r >= start.
struct TailEnvelope {
  double amplitude = 0.0;
  double rate = 0.0;
  double start = 0.0;
  double truncation = 0.0;  // h is taken to vanish beyond this radius
  double s = 1.0;
  int dimension = 3;

  [[nodiscard]] double operator()(double r) const;
};

/// Radial kernel h = (2 pi)^(-d/2) * Fourier transform of (1 - chi_s), tabulated
/// once at s = 1 and rescaled as h_s(r) = s^-d h_1(r / s).
class CutoffKernel {
 public:
  CutoffKernel(MomentumCutoff cutoff, int dimension);

  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] const MomentumCutoff& cutoff() const { return cutoff_; }
  [[nodiscard]] double h(double r) const;
  [[nodiscard]] double dh(double r) const;
  /// Minimum and maximum of h over [t0, t1].
  [[nodiscard]] std::pair<double, double> range(double t0, double t1) const;
  [[nodiscard]] double sup_abs_dh() const;
  [[nodiscard]] const TailEnvelope& tail() const { return tail_; }
  [[nodiscard]] double truncation_radius() const { return tail_.truncation; }
  /// Integral of h over space from the table.
  [[nodiscard]] double integral() const;

  /// h_1 and h_1' at r by direct radial quadrature of the momentum integral.
  static std::pair<double, double> unit_kernel_direct(double r, int dimension);

  struct Table;

 private:
  MomentumCutoff cutoff_;
  int dimension_;
  std::shared_ptr<const Table> table_;
  TailEnvelope tail_;
};

/// f_R(r) = sup over |y| <= R of |h(x - y) - h(x)| at |x| = r. For radial h
/// this is the largest deviation of h over [max(0, r - R), r + R].
double envelope_f_R(const CutoffKernel& kernel, double R, double r);

/// Annulus potential on R0 <= |x| <= R: 3/(R^3 - R0^3) in 3D, 1/nu(R) in 2D.
struct AnnulusU {
  int dimension = 3;
  double R0 = 0.0, R = 0.0, a = 0.0;
  double value = 0.0;
  double nu = 0.0;        // 2D only
  double nu_lower = 0.0;  // 1/2 (R^2 - R0^2)(ln(R/a) - 1/2)
  double nu_upper = 0.0;  // 1/2 R^2 ln(R/a)
  bool sandwich_holds = true;
  double integral = 0.0;    // integral of U
  double log_moment = 0.0;  // 2D: integral of U ln(|x|/a)

  [[nodiscard]] double operator()(double r) const { return r >= R0 && r <= R ? value : 0.0; }
};

AnnulusU annulus_U(double R0, double R, double a, int dimension);

/// Cutoff kernel, envelope f_R, soft potential w_R and annulus potential U.
class SoftPotentialKit {
 public:
  static constexpr double default_max_R_over_s = 0.5;

  SoftPotentialKit(int dimension, MomentumCutoff cutoff, double R, double R0, double a,
                   double max_R_over_s = default_max_R_over_s);

  [[nodiscard]] int dimension() const { return kernel_.dimension(); }
  [[nodiscard]] const CutoffKernel& kernel() const { return kernel_; }
  [[nodiscard]] const MomentumCutoff& cutoff() const { return kernel_.cutoff(); }
  [[nodiscard]] double R() const { return R_; }
  [[nodiscard]] double a() const { return U_.a; }
  [[nodiscard]] const AnnulusU& U() const { return U_; }

  [[nodiscard]] double f_exact(double r) const { return envelope_f_R(kernel_, R_, r); }
  /// w_R = c_d f_R(r) * integral f_R, c_3 = 2/pi^2, c_2 = 2/pi.
  [[nodiscard]] double w_exact(double r) const;
  /// Interpolated from a fine radial table (fast path for field sums).
  [[nodiscard]] double w(double r) const;
  [[nodiscard]] double f(double r) const;

  [[nodiscard]] double integral_f() const { return integral_f_; }
  [[nodiscard]] double sup_w() const { return sup_w_; }
  [[nodiscard]] double integral_w() const { return c_d_ * integral_f_ * integral_f_; }
  [[nodiscard]] double support_radius() const { return support_; }

  /// Coefficient of U and of w_R in the lower bound: 3D a and a, 2D 1 and
  /// (2 pi)^-1 * integral U.
  [[nodiscard]] double u_coefficient() const;
  [[nodiscard]] double w_coefficient() const;

 private:
  CutoffKernel kernel_;
  double R_;
  AnnulusU U_;
  double c_d_ = 0.0;
  double integral_f_ = 0.0;
  double sup_w_ = 0.0;
  double support_ = 0.0;
  double dr_ = 1.0;
  std::vector<double> f_table_;
};

/// Points whose nearest neighbour is at distance >= 2R, with
/// W_Y(x) = sum over them of (1 - eps) c_U U(x - y) - (c_w / eps) w_R(x - y).
class SoftField {
 public:
  SoftField(std::span<const Point> Y, const SoftPotentialKit& kit, double eps);

  [[nodiscard]] const std::vector<Point>& kept() const { return kept_; }
  [[nodiscard]] double eps() const { return eps_; }
  [[nodiscard]] double operator()(const Point& x) const;
  /// sum_j w_R(x - y_j) over the kept points.
  [[nodiscard]] double w_sum(const Point& x) const;
  [[nodiscard]] double u_sum(const Point& x) const;

 private:
  const SoftPotentialKit* kit_;
  double eps_;
  std::vector<Point> kept_;
};

SoftField soft_field_W_Y(std::span<const Point> Y, const SoftPotentialKit& kit, double eps);

/// Number of points whose nearest neighbour is closer than 2R; cell list.
std::size_t nearest_neighbor_count_I_R(std::span<const Point> points, double R);
/// Same count by direct O(N^2) comparison.
std::size_t nearest_neighbor_count_brute(std::span<const Point> points, double R);
/// Indices of points whose nearest neighbour is at least 2R away.
std::vector<std::size_t> isolated_points(std::span<const Point> points, double R);

/// sup over x of sum_i w_R(x - y_i): local grids around every point, then
/// pattern-search refinement of the best candidates.
double lattice_sum_sup(const SoftPotentialKit& kit, std::span<const Point> Y);

/// Uniform random points in [0, side]^d, rejecting any closer than 2R to an
/// accepted one.
std::vector<Point> separated_configuration(std::size_t count, double R, int dimension, unsigned long long seed,
                                           double side = 1.0);

struct WBoundFits {
  int dimension = 3;
  double R = 0.0;
  std::vector<double> s_values, sup_w, int_w;
  LineFit sup_fit;  // log sup w_R against log s at fixed R
  LineFit int_fit;  // log integral w_R against log s at fixed R
  double sup_constant = 0.0;  // max sup_w * s^5 / R^2 (3D), s^4 / R^2 (2D)
  double int_constant = 0.0;  // max int_w * s^2 / R^2
};

WBoundFits fit_w_bounds(int dimension, double R, std::span<const double> s_values);

struct LatticeSumReport {
  std::size_t count = 0;
  double sup_sum = 0.0;
  double constant = 0.0;  // sup_sum * R s^2 (3D), sup_sum * s^2 (2D)
};

LatticeSumReport lattice_sum_constant(const SoftPotentialKit& kit, std::size_t count, unsigned long long seed,
                                      double side = 1.0);

}  // namespace fermigas
