#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fermigas/potential.hpp"

namespace fermigas {

/// One spin-up and one spin-down particle in the Dirichlet box [0, ell]^d.
struct TwoBodyProblem {
  RadialPotential potential;
  double ell = 1.0;
  int cutoff = 4;  // largest sine mode index per axis per particle
  int dimension = 3;

  /// Throws std::invalid_argument for a hard core, cutoff < 2, range >= ell or a bad dimension.
  void validate() const;
};

struct TwoBodyOptions {
  int radial_order = 8;     // Gauss points per radial panel
  int radial_panels = 2;    // panels between consecutive breakpoints
  int angular_points = 12;  // Gauss points per angle on the positive octant (quadrant in 2D)
  double eigen_tolerance = 1e-11;
  int dense_limit = 1200;   // largest basis solved by a dense eigensolver
  double convergence_tolerance = 1e-3;
};

struct CutoffEnergy {
  int cutoff = 0;
  std::size_t basis_size = 0;
  double energy = 0.0;
};

struct TwoBodyResult {
  double energy = 0.0;       // value at the largest cutoff
  double free_energy = 0.0;  // 2 d pi^2 / ell^2
  std::vector<CutoffEnergy> trace;  // cutoffs 2 .. problem.cutoff
  double relative_change = 0.0;     // between the two largest cutoffs
  bool converged = false;

  [[nodiscard]] double shift() const { return energy - free_energy; }
};

/// Lowest eigenvalue of -Lap_x - Lap_y + v(|x - y|) restricted to products of Dirichlet
/// sine modes with indices 1..k on every axis, for k = 2 .. cutoff. Only the sector that is
/// even under the joint reflection of each axis is kept; it contains the ground state.
/// Throws std::runtime_error if the eigensolver does not converge.
TwoBodyResult ground_state_energy(const TwoBodyProblem& problem, const TwoBodyOptions& options = {});

/// 2 d pi^2 / ell^2.
double free_two_body_energy(double ell, int dimension);

/// 3D: E_free + 8 pi a int |phi_1|^4. 2D: E_free + 8 pi / |ln(rho a^2)| int |phi_1|^4 with
/// rho = 2 / ell^2 (heuristic). Throws std::invalid_argument for a < 0.
double pseudopotential_prediction(double a, double ell, int dimension = 3);

/// Multiplies the strength of `shape` until its zero-energy scattering length equals `a`.
RadialPotential tune_scattering_length(const RadialPotential& shape, double a, int dimension = 3);

nlohmann::json to_json(const TwoBodyResult& result);

}  // namespace fermigas
