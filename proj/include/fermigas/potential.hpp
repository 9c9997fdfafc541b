#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace fermigas {

// Natural units hbar^2/2m = 1: lengths share one arbitrary unit and the
// potential carries units of 1/length^2.

/// One radial piece of a potential tail on [r_lo, r_hi].
struct PotentialPiece {
  enum class Kind { constant, table };

  double r_lo = 0.0;
  double r_hi = 0.0;
  Kind kind = Kind::constant;
  double value = 0.0;                             // Kind::constant
  std::vector<std::pair<double, double>> points;  // Kind::table, (r, v)
};

struct ValidationReport {
  enum class Failure { positivity, range_ordering, grid_monotonicity, piece_layout };

  struct Issue {
    Failure kind;
    std::string message;
  };

  std::vector<Issue> issues;

  [[nodiscard]] bool passed() const { return issues.empty(); }
  [[nodiscard]] bool has(Failure f) const;
};

const char* to_string(ValidationReport::Failure f);

/// Positive, finite-range radial pair potential with an optional hard core.
///
/// The hard core is a radius, never a large number: evaluate() returns
/// +infinity for r < hard_core_radius and solvers branch on it. Tabulated
/// pieces are interpolated linearly; interpolation error against whatever
/// the table was sampled from is the caller's responsibility.
class RadialPotential {
 public:
  static constexpr double infinity = std::numeric_limits<double>::infinity();

  RadialPotential() = default;
  RadialPotential(std::string label, double hard_core_radius, double range,
                  std::vector<PotentialPiece> pieces);

  static RadialPotential zero(double range = 1.0);
  static RadialPotential hard_sphere(double radius);
  static RadialPotential square_barrier(double height, double range);
  /// v(r) = height * (1 - r/range) sampled on `nodes` points (exact for linear interpolation).
  static RadialPotential linear_ramp(double height, double range, int nodes = 2);
  /// Two concentric steps: `inner` on [0, split], `outer` on [split, range].
  static RadialPotential double_step(double inner, double outer, double split, double range);
  /// Hard core of radius `core` followed by a constant shoulder up to `range`.
  static RadialPotential hard_core_shoulder(double core, double shoulder, double range);

  static RadialPotential from_json(const nlohmann::json& doc);
  [[nodiscard]] nlohmann::json to_json() const;

  /// v(r); +infinity inside the core, 0 beyond the range. Throws for r < 0.
  [[nodiscard]] double evaluate(double r) const;
  [[nodiscard]] double operator()(double r) const { return evaluate(r); }

  /// v(r) using the piece that covers the open interval (lo, hi); r is clamped
  /// into [lo, hi]. Lets solvers evaluate one-sided limits at discontinuities.
  [[nodiscard]] double evaluate_within(double r, double lo, double hi) const;

  /// Largest finite value of the tail.
  [[nodiscard]] double max_value() const;

  [[nodiscard]] ValidationReport validate() const;

  /// Lengths multiplied by lambda, strengths by lambda^-2 (so a scales by lambda).
  [[nodiscard]] RadialPotential scaled(double lambda) const;
  /// Strengths multiplied by factor, lengths unchanged.
  [[nodiscard]] RadialPotential with_strength(double factor) const;

  /// Radii where the profile may be non-smooth (core, piece ends, table nodes), sorted.
  [[nodiscard]] std::vector<double> breakpoints() const;

  [[nodiscard]] bool has_hard_core() const { return hard_core_radius_ > 0.0; }
  /// True if the tail vanishes identically outside the core.
  [[nodiscard]] bool tail_is_zero() const;
  [[nodiscard]] bool is_identically_zero() const { return !has_hard_core() && tail_is_zero(); }

  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] double hard_core_radius() const { return hard_core_radius_; }
  [[nodiscard]] double range() const { return range_; }
  [[nodiscard]] const std::vector<PotentialPiece>& pieces() const { return pieces_; }

 private:
  std::string label_;
  double hard_core_radius_ = 0.0;
  double range_ = 0.0;
  std::vector<PotentialPiece> pieces_;
};

}  // namespace fermigas
