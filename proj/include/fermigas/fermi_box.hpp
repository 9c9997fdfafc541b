#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fermigas/types.hpp"

namespace fermigas {

using Mode = std::array<int, 3>;

/// The n lowest Dirichlet modes of the box [0, l]^d, ordered by |k|^2 and then
/// lexicographically. Unused components of a mode are zero. d = 1 is accepted
/// for small reference computations.
struct FermiSeaSpec {
  int dimension = 3;
  long n = 0;
  double ell = 1.0;
  std::vector<Mode> modes;

  [[nodiscard]] double eigenvalue(std::size_t i) const;
  /// Normalized sine-product orbitals at x, one entry per mode.
  [[nodiscard]] Eigen::VectorXd orbitals(const Point& x) const;
  [[nodiscard]] bool contains(const Point& x) const;
};

FermiSeaSpec make_fermi_sea(long n, double ell, int dimension);

/// Exact integer sum of |k|^2 over the n lowest modes.
std::uint64_t dirichlet_k2_sum(long n, int dimension);

/// Sum of the n lowest Dirichlet eigenvalues pi^2 |k|^2 / l^2.
double dirichlet_energy_sum(long n, double ell, int dimension);

/// Cumulative sums of |k|^2 for every n in [1, n_max], from one enumeration.
std::vector<std::uint64_t> dirichlet_k2_prefix(long n_max, int dimension);

/// Thermodynamic kinetic energy of n spinless fermions in volume l^d.
double kinetic_leading(double n, double ell, int dimension);

/// Kinetic part of the leading energy density: (3/5)(6 pi^2)^(2/3) sum rho^(5/3)
/// in 3D and 2 pi sum rho^2 in 2D.
double fermi_leading_term(std::span<const double> densities, int dimension);

/// (1/l^d) sum_{p,q} prod_a (1 + delta(p_a, q_a)/2), the integral of the squared
/// one-particle density. Computed with per-axis-subset projection counts.
double density_square_integral(const FermiSeaSpec& spec);
double density_square_integral(long n, double ell, int dimension = 3);

double one_particle_density(const FermiSeaSpec& spec, const Point& x);
/// Mode kernel K(x, y) = sum_k phi_k(x) phi_k(y).
double mode_kernel(const FermiSeaSpec& spec, const Point& x, const Point& y);
/// rho(x) rho(y) - K(x, y)^2; integrates to n(n-1) over the box squared.
double two_particle_density(const FermiSeaSpec& spec, const Point& x, const Point& y);

/// Gamma(p) = max(1 - k_F^2 / p^2, 0).
struct GammaFilter {
  double k_F = 0.0;
  [[nodiscard]] double operator()(double p) const;
};

struct BathtubReport {
  double value = 0.0;        // closed form (3/5)(6 pi^2)^(2/3) N1^(5/3) / L^2
  double ball_radius = 0.0;  // (6 pi^2 N1 / L^3)^(1/3)
  double k_F = 0.0;          // (6 pi^2 rho)^(1/3)
  double grid_value = 0.0;   // minimum over the radial grid
  double grid_radius = 0.0;  // outer radius of the occupied region on the grid
  bool minimizer_is_ball = false;
};

/// Minimum of the phase-space integral of p^2 (1 - Gamma(p)) over occupation
/// functions 0 <= xi <= 1 holding N1 particles in volume L^3, with Gamma built
/// from the total density rho.
BathtubReport low_momentum_bound(double N1, double rho, double L, int grid_shells = 20000);

}  // namespace fermigas
