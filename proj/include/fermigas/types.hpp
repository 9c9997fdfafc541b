#pragma once

#include <array>
#include <cmath>

namespace fermigas {

/// Point in up to three dimensions; unused trailing coordinates are zero.
using Point = std::array<double, 3>;

inline double distance(const Point& x, const Point& y) {
  const double dx = x[0] - y[0], dy = x[1] - y[1], dz = x[2] - y[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace fermigas
