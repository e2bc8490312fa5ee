#pragma once

#include <cstddef>
#include <vector>

#include "escat/units.hpp"

namespace escat {

// Product grid (theta_i, phi_j, omega_k) for angular-spectral maps.
// Solid-angle quadrature is Gauss-Legendre in cos(theta) times uniform
// (periodic trapezoid) azimuth; frequency quadrature is trapezoidal on the
// stored omega list (omega in units of omega0).
class AngularSpectralGrid {
 public:
  static AngularSpectralGrid make(std::size_t n_theta, std::size_t n_phi, std::size_t n_omega,
                                  double omega_min, double omega_max);

  // Explicit node lists without angular quadrature weights; integrals over
  // solid angle are rejected for such grids (per-direction spectra only).
  static AngularSpectralGrid from_directions(const std::vector<double>& thetas,
                                             const std::vector<double>& phis,
                                             std::size_t n_omega, double omega_min,
                                             double omega_max);

  const std::vector<double>& thetas() const { return thetas_; }
  const std::vector<double>& phis() const { return phis_; }
  const std::vector<double>& omegas() const { return omegas_; }

  std::size_t n_theta() const { return thetas_.size(); }
  std::size_t n_phi() const { return phis_.size(); }
  std::size_t n_omega() const { return omegas_.size(); }
  std::size_t n_directions() const { return thetas_.size() * phis_.size(); }
  std::size_t n_nodes() const { return n_directions() * omegas_.size(); }

  bool has_angular_quadrature() const { return has_angular_quadrature_; }
  // d(Omega) weight of direction node (i_theta, i_phi); sums to 4*pi.
  double solid_angle_weight(std::size_t i_theta, std::size_t i_phi) const;
  // Trapezoid weight of omega node k.
  double omega_weight(std::size_t k) const { return omega_weights_[k]; }

  Direction direction(std::size_t i_theta, std::size_t i_phi) const;

 private:
  AngularSpectralGrid() = default;
  void build_omegas(std::size_t n_omega, double omega_min, double omega_max);

  std::vector<double> thetas_;
  std::vector<double> theta_weights_;  // weights in cos(theta)
  std::vector<double> phis_;
  double phi_weight_ = 0.0;
  std::vector<double> omegas_;
  std::vector<double> omega_weights_;
  bool has_angular_quadrature_ = false;
};

// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1],
// ascending nodes. Exposed for reuse in tests and the cloud-efficiency scan.
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace escat
