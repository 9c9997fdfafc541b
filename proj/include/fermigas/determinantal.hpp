#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fermigas/fermi_box.hpp"
#include "fermigas/scattering.hpp"

namespace fermigas {

/// Real weight function on the box.
using Weight = std::function<double(const Point&)>;

/// Tensor-product Gauss-Legendre on [0, l]^d: `panels` equal panels of
/// `order` points along each axis.
struct BoxQuadrature {
  int panels = 2;
  int order = 16;
};

/// M_ab = integral of phi_a phi_b |h|^2 over the box (symmetrized).
Eigen::MatrixXd overlap_matrix(const FermiSeaSpec& basis, const Weight& h, const BoxQuadrature& quad = {});

/// Slater determinant of `basis` multiplied by prod_i h(x_i).
class WeightedSlater {
 public:
  static constexpr double max_condition = 1e12;

  WeightedSlater(FermiSeaSpec basis, Weight h, const BoxQuadrature& quad = {});
  /// Uses a precomputed overlap matrix.
  WeightedSlater(FermiSeaSpec basis, Weight h, Eigen::MatrixXd M);

  [[nodiscard]] const FermiSeaSpec& basis() const { return basis_; }
  [[nodiscard]] const Eigen::MatrixXd& M() const { return M_; }
  [[nodiscard]] double condition() const { return condition_; }

  /// det M.
  [[nodiscard]] double norm() const;
  /// Inverse of M; throws SingularMatrix beyond max_condition.
  [[nodiscard]] const Eigen::MatrixXd& M_inverse() const;

  /// (1/k!) prod |h(x_i)|^2 det[(x_i|M^-1|x_j)], 1 <= k <= 3. Normalized so
  /// that it integrates to binom(n, k).
  [[nodiscard]] double k_particle_density(std::span<const Point> points) const;

 private:
  FermiSeaSpec basis_;
  Weight h_;
  Eigen::MatrixXd M_;
  Eigen::MatrixXd M_inv_;
  double condition_ = 1.0;
  bool singular_ = false;

  void factorize();
};

double slater_norm(const WeightedSlater& ws);
double k_particle_density(const WeightedSlater& ws, std::span<const Point> points);

/// det(M) Tr[K M^-1] with K_ab = integral of phi_a phi_b |k|^2.
double weighted_trace(const FermiSeaSpec& basis, const Weight& h, const Weight& k, const BoxQuadrature& quad = {});

/// Expression a R^2 / s^3 + n^(2/3) s^2 / l^2 bounding ||1 - M_Y|| up to a constant.
double m_deviation_expression(double a, double R, double s, double ell, long n);

/// Default constant for the ||1 - M_Y|| bound: 1.25 times the largest ratio
/// (0.3612) over the 200-case corpus with seed 7, rounded up and frozen.
inline constexpr double kMDeviationConstant = 0.46;

struct MDeviationReport {
  double exact = 0.0;       // largest eigenvalue of 1 - M_Y
  double expression = 0.0;  // a R^2 / s^3 + n^(2/3) s^2 / l^2
  double constant = 0.0;
  double bound = 0.0;       // constant * expression
  bool within = true;
};

/// Exact 1 - M_Y = sum_j integral over B(y_j, R) of (1 - f^2) phi_a phi_b, by
/// spherical quadrature around each centre; returns its largest eigenvalue.
Eigen::MatrixXd m_deviation_matrix(const FermiSeaSpec& basis, std::span<const Point> Y, const CutoffProfile& f);

MDeviationReport m_deviation(const FermiSeaSpec& basis, std::span<const Point> Y, const CutoffProfile& f,
                             double s, double constant = kMDeviationConstant);

/// One randomized configuration for the ||1 - M_Y|| study.
struct MDeviationCase {
  long n = 0;
  double ell = 1.0;
  double R = 0.0;
  double s = 0.0;
  double core = 0.0;  // hard-sphere radius, equals a
  std::vector<Point> Y;
};

std::vector<MDeviationCase> m_deviation_corpus(std::size_t count, unsigned long long seed);

struct CalibrationResult {
  double max_ratio = 0.0;  // max over the corpus of exact / expression
  double constant = 0.0;   // max_ratio times the safety margin
};

CalibrationResult calibrate_m_deviation_constant(std::span<const MDeviationCase> corpus, double margin = 1.25);

/// Evaluates one corpus case with the given constant.
MDeviationReport evaluate_m_deviation_case(const MDeviationCase& c, double constant = kMDeviationConstant);

struct CorrectionFactors {
  double A = 1.0;
  double B = 1.0;
  double a = 0.0, R = 0.0, s = 0.0, ell = 0.0;
  long n = 0;
  double C_A = 1.0, C_B = 1.0;
};

/// A_n = 1/(1 - C_A [a R^2/s^3 + n^(2/3)(s/l)^2]), B_n = 1/(1 - C_B n^(8/3) A_n^2 (s/l)^5).
/// Throws ScheduleInfeasible when a denominator is not positive.
CorrectionFactors correction_factors(double a, double R, double s, double ell, long n, double C_A = 1.0,
                                     double C_B = 1.0);

}  // namespace fermigas
