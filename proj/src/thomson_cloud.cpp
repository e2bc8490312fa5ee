#include "escat/thomson_cloud.hpp"

#include <cmath>

#include "escat/errors.hpp"
#include "escat/grid.hpp"

namespace escat {

namespace {
constexpr std::size_t kQuadN = 256;

double raw_total(const GaussianCloud& cloud) {
  std::vector<double> nodes, weights;
  gauss_legendre(kQuadN, nodes, weights);
  const double q = cloud.kappa_mag * cloud.kappa_mag * cloud.r0 * cloud.r0;
  const double dphi = 2.0 * M_PI / static_cast<double>(kQuadN);
  double total = 0.0;
  for (std::size_t i = 0; i < kQuadN; ++i) {
    const double cos_theta = nodes[i];
    const double sin_theta = std::sqrt(1.0 - cos_theta * cos_theta);
    double phi_sum = 0.0;
    for (std::size_t j = 0; j < kQuadN; ++j) {
      const double phi = dphi * static_cast<double>(j);
      phi_sum += std::exp(-q * (1.0 - sin_theta * std::cos(phi)));
    }
    total += weights[i] * sin_theta * sin_theta * phi_sum * dphi;
  }
  return total;
}
}  // namespace

void GaussianCloud::validate() const {
  if (!(r0 >= 0.0) || !std::isfinite(r0)) throw ConfigError("cloud r0 must be >= 0");
  if (!(kappa_mag > 0.0) || !std::isfinite(kappa_mag)) {
    throw ConfigError("cloud kappa_mag must be positive");
  }
}

double cloud_suppression(const GaussianCloud& cloud, const Direction& d) {
  cloud.validate();
  const double q = cloud.kappa_mag * cloud.kappa_mag * cloud.r0 * cloud.r0;
  return std::exp(-q * (1.0 - std::sin(d.theta) * std::cos(d.phi)));
}

double cloud_intensity(const GaussianCloud& cloud, const Direction& d) {
  const double s = std::sin(d.theta);
  return s * s * cloud_suppression(cloud, d);
}

double cloud_total_efficiency(const GaussianCloud& cloud) {
  cloud.validate();
  const GaussianCloud point{0.0, cloud.kappa_mag};
  return raw_total(cloud) / raw_total(point);
}

EfficiencyScan efficiency_scan(const std::vector<double>& r0_values,
                               const std::vector<Direction>& directions, double kappa_mag) {
  if (r0_values.empty() || directions.empty()) {
    throw ConfigError("efficiency scan needs at least one r0 and one direction");
  }
  EfficiencyScan scan;
  scan.kappa_mag = kappa_mag;
  scan.r0_values = r0_values;
  scan.directions = directions;
  scan.totals.reserve(r0_values.size());
  scan.ratios.reserve(r0_values.size());
  for (double r0 : r0_values) {
    const GaussianCloud cloud{r0, kappa_mag};
    cloud.validate();
    scan.totals.push_back(cloud_total_efficiency(cloud));
    std::vector<double> row;
    row.reserve(directions.size());
    for (const Direction& d : directions) row.push_back(cloud_suppression(cloud, d));
    scan.ratios.push_back(std::move(row));
  }
  return scan;
}

}  // namespace escat
