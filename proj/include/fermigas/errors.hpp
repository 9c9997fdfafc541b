#pragma once

#include <stdexcept>
#include <string>

namespace fermigas {

/// A parameter schedule falls outside the regime where a bound is defined
/// (a correction-factor denominator is non-positive or an error channel is
/// too large). The CLI maps this to exit status 2.
class ScheduleInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative numerical method did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  [[nodiscard]] double achieved() const { return achieved_; }

 private:
  double achieved_;
};

/// A matrix needed for inversion is singular to working precision.
class SingularMatrix : public std::runtime_error {
 public:
  SingularMatrix(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  [[nodiscard]] double condition() const { return condition_; }

 private:
  double condition_;
};

}  // namespace fermigas
