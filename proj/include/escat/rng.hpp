#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace escat {

// Open-interval uniform on (0,1): take the top 53 bits and center the cell.
// Never returns 0 or 1, so it is safe to feed into log().
inline double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// One Box-Muller draw, consuming exactly two engine outputs. Using a fixed
// transform instead of std::normal_distribution keeps streams bit-identical
// across standard library implementations.
inline std::pair<double, double> normal_pair(std::mt19937_64& rng) {
  const double u1 = uniform_open(rng);
  const double u2 = uniform_open(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace escat
