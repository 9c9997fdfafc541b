#pragma once

#include <string>
#include <vector>

#include "fermigas/potential.hpp"

namespace fermigas {

/// Zero-energy solution of -Laplace(phi) + v phi / 2 = 0 for a radial potential.
///
/// 3D: phi -> 1 at infinity, phi = 1 - a/r outside the range.
/// 2D: the raw profile grows like ln(r/a); normalized_phi(r, R_ref) divides by
/// its value at R_ref. In 2D the scattering length may underflow, so log_a is
/// the primary quantity there.
class ScatteringSolution {
 public:
  int dimension = 3;
  double a = 0.0;
  double log_a = -RadialPotential::infinity;
  double r_start = 0.0;  // hard-core radius or 0
  double r_max = 0.0;
  double residual = 0.0;  // achieved accuracy estimate on a (relative)
  RadialPotential potential;

  /// Raw samples on [r_start, R0]: 3D stores u = r*phi_raw, 2D stores phi_raw.
  std::vector<double> grid;
  std::vector<double> y;
  std::vector<double> dy;   // 3D: u', 2D: w = r phi_raw'
  std::vector<double> ddy;       // derivative of dy, right-sided at breakpoints
  std::vector<double> ddy_left;  // left-sided counterpart

  /// Exterior continuation. 3D: u = slope*(r - a). 2D: phi_raw = slope*(ln r - log_a).
  double slope = 1.0;

  /// Quadrature of the interior part of the energy integrand in raw scale.
  double interior_energy_raw = 0.0;

  [[nodiscard]] bool trivial() const { return potential.is_identically_zero(); }

  /// 3D normalization (phi -> 1); in 2D the raw profile divided by `slope`, i.e. ln(r/a) outside.
  [[nodiscard]] double phi(double r) const;
  [[nodiscard]] double dphi(double r) const;

  /// 2D profile normalized to 1 at R_ref (3D: same as phi).
  [[nodiscard]] double normalized_phi(double r, double R_ref) const;
  [[nodiscard]] double normalized_dphi(double r, double R_ref) const;

  /// CSV text with columns r, phi, dphi covering [r_start, r_max].
  [[nodiscard]] std::string profile_csv(double R_ref = 0.0) const;

 private:
  void raw_at(double r, double& value, double& deriv) const;
};

ScatteringSolution solve_zero_energy(const RadialPotential& potential, int dimension,
                                     double tolerance = 1e-10, double R_hint = 0.0);

/// Integral over |x| <= R of |grad phi|^2 + v phi^2 / 2 (2D with phi(R) = 1).
double scattering_energy_integral(const ScatteringSolution& solution, double R);

/// f = phi / (1 - a/R) (3D) or the 2D profile normalized at R, set to 1 outside R;
/// xi = |f'|^2 + v f^2 / 2 inside R and 0 outside.
class CutoffProfile {
 public:
  CutoffProfile() = default;
  CutoffProfile(ScatteringSolution solution, double R);

  [[nodiscard]] double R() const { return R_; }
  [[nodiscard]] int dimension() const { return solution_.dimension; }
  [[nodiscard]] double a() const { return solution_.a; }
  [[nodiscard]] double core_radius() const { return solution_.potential.hard_core_radius(); }
  [[nodiscard]] const ScatteringSolution& solution() const { return solution_; }
  [[nodiscard]] bool is_identity() const { return identity_; }

  [[nodiscard]] double f(double r) const;
  [[nodiscard]] double df(double r) const;
  [[nodiscard]] double xi(double r) const;
  /// Integral of xi over space, by radial quadrature.
  [[nodiscard]] double integral_xi() const { return integral_xi_; }

  /// f identically 1 (no correlation).
  static CutoffProfile identity(int dimension, double R);

 private:
  ScatteringSolution solution_;
  double R_ = 0.0;
  double scale_ = 1.0;
  double integral_xi_ = 0.0;
  bool identity_ = false;
};

CutoffProfile xi_profile(const ScatteringSolution& solution, double R);

/// 3D closed form for the square barrier of height v0 and range R0.
double square_barrier_scattering_length(double v0, double R0);

}  // namespace fermigas
