#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace fermigas {

/// One comparison of a determinantal formula against exhaustive quadrature of |det|^2.
struct DeterminantalCheck {
  int dimension = 1;
  long n = 0;
  int weight = 0;          // index of the random weight within its case
  std::string quantity;    // "norm", "density1", "density2", "density3" or "trace"
  double formula = 0.0;
  double brute_force = 0.0;
  double error = 0.0;      // |formula - brute| / max(|brute|, 1)
  bool passed = false;
};

struct DeterminantalCheckReport {
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::size_t weights = 0;
  std::vector<DeterminantalCheck> checks;
  double max_error = 0.0;
  std::size_t failures = 0;

  [[nodiscard]] bool passed() const { return failures == 0 && !checks.empty(); }
};

/// Random smooth weights h, k on small Fermi seas (n <= 4 in 1D, n <= 3 in 2D, n = 2 in 3D):
/// norm, 1-3 particle densities at random points and the trace identity, each compared with
/// a tensor Gauss-Legendre integral of |det phi_a(x_i)|^2 prod h(x_i)^2 / n! over the free
/// coordinates. `scale` multiplies the number of weights per case (at least one each).
DeterminantalCheckReport determinantal_check(std::uint64_t seed, double tolerance = 1e-5, int scale = 1);

nlohmann::json to_json(const DeterminantalCheckReport& report);

}  // namespace fermigas
