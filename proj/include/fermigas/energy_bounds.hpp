#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fermigas/fit.hpp"

namespace fermigas {

/// Densities rho_i of q species and their pairwise scattering lengths.
struct GasState {
  int dimension = 3;
  std::vector<double> densities;
  std::vector<std::vector<double>> a;  // symmetric q x q
  double R0 = 0.0;

  /// All a_ij equal to `a`.
  static GasState uniform(int dimension, std::vector<double> densities, double a, double R0 = 0.0);
  [[nodiscard]] double total_density() const;
  /// Throws std::invalid_argument on a bad dimension, negative density or asymmetric a.
  void validate() const;
};

struct LeadingEnergy {
  double kinetic = 0.0;
  double interaction = 0.0;
  [[nodiscard]] double total() const { return kinetic + interaction; }
};

/// 3D: (3/5)(6 pi^2)^(2/3) sum rho_i^(5/3) + 8 pi sum_{i<j} a_ij rho_i rho_j;
/// 2D: 2 pi sum rho_i^2 + 8 pi sum_{i<j} rho_i rho_j / |ln(rho a_ij^2)|, rho the total density.
LeadingEnergy leading_energy_parts(const GasState& state);
double leading_energy(const GasState& state);

/// Densities {rho_1, rho_2}, rho_1 >= rho_2, minimising the two-species leading energy at total rho.
std::vector<double> balanced_minimum(int dimension, double rho, double a);

/// Unnamed constants of the error terms, one per channel, default 1.
class BoundConstants {
 public:
  BoundConstants() = default;
  /// {"version": 1, "constants": {name: value, ...}}; unknown names are rejected.
  static BoundConstants from_json(const nlohmann::json& doc);
  static const std::vector<std::string>& names();

  [[nodiscard]] double get(const std::string& name) const;
  void set(const std::string& name, double value);

  /// Upper-bound exponent in 2D: R = rho^(-1/2) |ln(a^2 rho)|^(-alpha).
  double alpha_2d = 3.0;

 private:
  std::map<std::string, double> values_;
};

struct Channel {
  std::string name;
  double size = 0.0;     // dimensionless size of the error term
  double energy = 0.0;   // contribution to |total - leading|, same units as the report
  bool bracketed = false;  // counts towards feasibility
};

struct Schedule {
  double R = 0.0, s = 0.0, ell = 0.0;
  double eps = 0.0, delta = 0.0;
  double n = 0.0, m = 0.0;
  double eps1 = 0.0, eps2 = 0.0;  // rounding residues of the particle numbers
};

/// Energies are in units of rho^((d+2)/d) (schedules) or absolute (box bound);
/// `log_energy_unit` is the natural log of that unit, lengths in Schedule use rho^(-1/d).
struct BoundReport {
  int dimension = 3;
  bool upper = true;
  double gas_parameter = 0.0;  // 3D a rho^(1/3), 2D |ln(a^2 rho)|
  double log_energy_unit = 0.0;
  double leading_kinetic = 0.0;
  double leading_interaction = 0.0;
  std::vector<Channel> channels;
  double excess = 0.0;   // upper: sum of channel energies; lower: minus that sum
  double total = 0.0;    // leading + excess
  double eps_rho = 0.0;  // excess / (a rho^2) in 3D, excess / (rho^2 / |ln(a^2 rho)|) in 2D
  Schedule schedule;
  bool feasible = true;
  std::string infeasible_reason;

  [[nodiscard]] double leading() const { return leading_kinetic + leading_interaction; }
  [[nodiscard]] const Channel& channel(const std::string& name) const;
};

struct BoxBound {
  BoundReport at_eps;   // bound at the given eps
  BoundReport optimal;  // at the optimal eps
  double optimal_eps = 0.0;
};

/// Finite-box trial-state bound on E_0(n, m, ell) in 3D, absolute units.
BoxBound upper_bound_box(double n, double m, double ell, double R, double s, double eps, double a, double R0,
                         const BoundConstants& constants = {});

/// Two species at total gas parameter g (3D a rho^(1/3), 2D |ln(a^2 rho)|), first-species fraction
/// `fraction` in (0, 1), R0/a >= 1.
struct GasPoint {
  int dimension = 3;
  double gas_parameter = 0.0;
  double fraction = 0.5;
  double R0_over_a = 1.0;

  static GasPoint from_densities(int dimension, double rho1, double rho2, double a, double R0);
  void validate() const;
};

BoundReport upper_bound_schedule(const GasPoint& point, const BoundConstants& constants = {});
BoundReport lower_bound_schedule(const GasPoint& point, const BoundConstants& constants = {});
BoundReport upper_bound_schedule(double rho1, double rho2, double a, double R0, const BoundConstants& constants = {},
                                 int dimension = 3);
BoundReport lower_bound_schedule(double rho1, double rho2, double a, double R0, const BoundConstants& constants = {},
                                 int dimension = 3);

struct BoundsRow {
  GasPoint point;
  BoundReport upper;
  BoundReport lower;
  [[nodiscard]] bool sandwich() const { return lower.excess <= 0.0 && upper.excess >= 0.0; }
};

struct BoundsSweep {
  int dimension = 3;
  std::vector<BoundsRow> rows;
  LineFit upper_fit;     // log eps_upper vs log g
  LineFit lower_fit;     // log |eps_lower| vs log g
  LineFit upper_log_fit; // 2D: eps_upper * L against ln L
  LineFit upper_reduced_fit;  // 2D: log(eps_upper / ln L) vs log L
  LineFit ratio_fit;     // 2D: interaction ratio - 1 against ln L / L
  double upper_prefactor = 0.0;  // max eps_upper / g^(2/9) (3D) over feasible rows
  double lower_prefactor = 0.0;  // max |eps_lower| / g^(1/13) (3D), / L^(-1/10) (2D)
  std::size_t infeasible = 0;
  [[nodiscard]] bool all_sandwiched() const;
};

/// Evaluates both schedules at every gas parameter (parallel, row order preserved) and fits
/// over the feasible rows; needs at least three feasible rows.
BoundsSweep sweep_bounds(int dimension, std::span<const double> gas_parameters, double fraction, double R0_over_a,
                         const BoundConstants& constants = {});

nlohmann::json to_json(const BoundReport& report);
nlohmann::json to_json(const BoundsSweep& sweep);

}  // namespace fermigas
