#include "escat/grid.hpp"

#include <cmath>

#include "escat/errors.hpp"

namespace escat {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw ConfigError("Gauss-Legendre order must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // One more recurrence pass at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = pk;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;  // ascending order: guesses start near +1
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

void AngularSpectralGrid::build_omegas(std::size_t n_omega, double omega_min, double omega_max) {
  if (n_omega < 2) throw ConfigError("need at least 2 frequency nodes");
  if (!(omega_min > 0.0) || !(omega_max > omega_min)) {
    throw ConfigError("frequency range must satisfy 0 < omega_min < omega_max");
  }
  omegas_.resize(n_omega);
  const double d = (omega_max - omega_min) / static_cast<double>(n_omega - 1);
  for (std::size_t k = 0; k < n_omega; ++k) omegas_[k] = omega_min + d * static_cast<double>(k);
  omega_weights_.assign(n_omega, d);
  omega_weights_.front() = 0.5 * d;
  omega_weights_.back() = 0.5 * d;
}

AngularSpectralGrid AngularSpectralGrid::make(std::size_t n_theta, std::size_t n_phi,
                                              std::size_t n_omega, double omega_min,
                                              double omega_max) {
  if (n_theta < 2 || n_phi < 2) throw ConfigError("angular grid needs at least 2x2 nodes");
  AngularSpectralGrid g;
  std::vector<double> u;
  gauss_legendre(n_theta, u, g.theta_weights_);
  g.thetas_.resize(n_theta);
  // Ascending u = cos(theta) means descending theta; store theta ascending.
  for (std::size_t i = 0; i < n_theta; ++i) g.thetas_[i] = std::acos(u[n_theta - 1 - i]);
  std::vector<double> w = g.theta_weights_;
  for (std::size_t i = 0; i < n_theta; ++i) g.theta_weights_[i] = w[n_theta - 1 - i];
  g.phis_.resize(n_phi);
  g.phi_weight_ = 2.0 * kPi / static_cast<double>(n_phi);
  for (std::size_t j = 0; j < n_phi; ++j) g.phis_[j] = g.phi_weight_ * static_cast<double>(j);
  g.build_omegas(n_omega, omega_min, omega_max);
  g.has_angular_quadrature_ = true;
  return g;
}

AngularSpectralGrid AngularSpectralGrid::from_directions(const std::vector<double>& thetas,
                                                         const std::vector<double>& phis,
                                                         std::size_t n_omega, double omega_min,
                                                         double omega_max) {
  if (thetas.empty() || phis.empty()) throw ConfigError("direction lists must be non-empty");
  AngularSpectralGrid g;
  g.thetas_ = thetas;
  g.phis_ = phis;
  for (double th : thetas) (void)Direction(th, 0.0);
  for (double ph : phis) (void)Direction(kPi / 2.0, ph);
  g.build_omegas(n_omega, omega_min, omega_max);
  g.has_angular_quadrature_ = false;
  return g;
}

double AngularSpectralGrid::solid_angle_weight(std::size_t i_theta, std::size_t i_phi) const {
  if (!has_angular_quadrature_) {
    throw NumericError("grid built from explicit directions carries no solid-angle quadrature");
  }
  (void)i_phi;
  return theta_weights_[i_theta] * phi_weight_;
}

Direction AngularSpectralGrid::direction(std::size_t i_theta, std::size_t i_phi) const {
  return Direction(thetas_[i_theta], phis_[i_phi]);
}

}  // namespace escat
