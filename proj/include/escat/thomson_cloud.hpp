#pragma once

#include <vector>

#include "escat/units.hpp"

namespace escat {

// Rigid Gaussian charge distribution driven coherently at wavenumber kappa,
// the semiclassical extended-charge model. r0 and 1/kappa_mag share one
// length unit; only the product kappa_mag * r0 matters.
struct GaussianCloud {
  double r0 = 0.0;
  double kappa_mag = 1.0;

  void validate() const;  // throws ConfigError
};

// Relative far-field intensity sin^2(theta) exp(-|kappa|^2 r0^2 (1 - sin
// theta cos phi)); the point-charge peak (theta = pi/2, phi = 0) is 1.
double cloud_intensity(const GaussianCloud& cloud, const Direction& d);

// Coherent suppression factor alone, without the dipole pattern: the ratio of
// cloud to point-charge intensity in direction d. Well defined at the poles.
double cloud_suppression(const GaussianCloud& cloud, const Direction& d);

// Total scattered power relative to the r0 = 0 point charge; both totals come
// from the same 256x256 Gauss-Legendre x trapezoid quadrature.
double cloud_total_efficiency(const GaussianCloud& cloud);

struct EfficiencyScan {
  double kappa_mag = 1.0;
  std::vector<double> r0_values;
  std::vector<Direction> directions;
  std::vector<double> totals;               // [i_r0]
  std::vector<std::vector<double>> ratios;  // [i_r0][i_direction]
};

EfficiencyScan efficiency_scan(const std::vector<double>& r0_values,
                               const std::vector<Direction>& directions, double kappa_mag);

}  // namespace escat
