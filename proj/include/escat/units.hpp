#pragma once

#include "escat/vec3.hpp"

namespace escat {

// Normalized units used throughout the simulation core: time in 1/omega0,
// length in 1/k0 = lambda/(2*pi), momentum in m_e*c, fields in units of
// m_e*c*omega0/e (so the peak normalized field equals a0).
class UnitSystem {
 public:
  explicit UnitSystem(double wavelength_nm);

  double wavelength_nm() const { return wavelength_nm_; }
  double omega0_rad_per_s() const { return omega0_; }
  double k0_per_m() const { return k0_; }
  double laser_period_s() const;

  // Photon quantum of the fundamental, in eV.
  double hbar_omega0_eV() const { return hbar_omega0_eV_; }
  // Photon energy at omega = omega_over_omega0 * omega0, in eV.
  double photon_energy_eV(double omega_over_omega0) const;
  // omega/omega0 for a vacuum wavelength in nm.
  double omega_from_wavelength_nm(double lambda_nm) const;

  double to_normalized_time(double seconds) const { return seconds * omega0_; }
  double to_seconds(double t_norm) const { return t_norm / omega0_; }
  double to_normalized_length(double meters) const { return meters * k0_; }
  double to_meters(double x_norm) const { return x_norm / k0_; }
  double to_normalized_momentum(double p_si) const;
  double to_si_momentum(double p_norm) const;

 private:
  double wavelength_nm_;
  double omega0_;
  double k0_;
  double hbar_omega0_eV_;
};

// a0 = e*E0/(m_e*c*omega0) with E0 the peak field of a linearly polarized wave
// of the given cycle-averaged peak intensity.
double a0_from_intensity(double intensity_W_cm2, double wavelength_nm);
double intensity_from_a0(double a0, double wavelength_nm);

// Polar angle from +z, azimuth from +x in the x-y plane; the laser propagates
// along +x and is polarized along z, so theta = pi/2, phi = 0 faces forward.
struct Direction {
  Direction(double theta_rad, double phi_rad);
  double theta;
  double phi;
};

Vec3 direction_to_unit_vector(const Direction& d);

}  // namespace escat
