#include "escat/units.hpp"

#include <cmath>

#include "escat/constants.hpp"
#include "escat/errors.hpp"

namespace escat {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

UnitSystem::UnitSystem(double wavelength_nm) : wavelength_nm_(wavelength_nm) {
  if (!(wavelength_nm > 0.0) || !std::isfinite(wavelength_nm)) {
    throw ConfigError("wavelength_nm must be positive and finite");
  }
  const double lambda_m = wavelength_nm * 1e-9;
  k0_ = 2.0 * kPi / lambda_m;
  omega0_ = k0_ * constants::c_m_per_s;
  hbar_omega0_eV_ = constants::hc_eV_nm / wavelength_nm;
}

double UnitSystem::laser_period_s() const { return 2.0 * kPi / omega0_; }

double UnitSystem::photon_energy_eV(double omega_over_omega0) const {
  return omega_over_omega0 * hbar_omega0_eV_;
}

double UnitSystem::omega_from_wavelength_nm(double lambda_nm) const {
  if (!(lambda_nm > 0.0)) throw ConfigError("wavelength must be positive");
  return wavelength_nm_ / lambda_nm;
}

double UnitSystem::to_normalized_momentum(double p_si) const {
  return p_si / constants::electron_mc_kg_m_per_s;
}

double UnitSystem::to_si_momentum(double p_norm) const {
  return p_norm * constants::electron_mc_kg_m_per_s;
}

double a0_from_intensity(double intensity_W_cm2, double wavelength_nm) {
  if (!(intensity_W_cm2 >= 0.0) || !std::isfinite(intensity_W_cm2)) {
    throw ConfigError("peak intensity must be non-negative and finite");
  }
  const UnitSystem units(wavelength_nm);
  const double intensity_W_m2 = intensity_W_cm2 * 1e4;
  const double e_peak =
      std::sqrt(2.0 * intensity_W_m2 / (constants::epsilon0_F_per_m * constants::c_m_per_s));
  return constants::elementary_charge_C * e_peak /
         (constants::electron_mc_kg_m_per_s * units.omega0_rad_per_s());
}

double intensity_from_a0(double a0, double wavelength_nm) {
  if (!(a0 >= 0.0)) throw ConfigError("a0 must be non-negative");
  const UnitSystem units(wavelength_nm);
  const double e_peak = a0 * constants::electron_mc_kg_m_per_s * units.omega0_rad_per_s() /
                        constants::elementary_charge_C;
  const double intensity_W_m2 =
      0.5 * constants::epsilon0_F_per_m * constants::c_m_per_s * e_peak * e_peak;
  return intensity_W_m2 * 1e-4;
}

Direction::Direction(double theta_rad, double phi_rad) : theta(theta_rad), phi(phi_rad) {
  if (!(theta >= 0.0 && theta <= kPi)) throw ConfigError("direction theta must lie in [0, pi]");
  if (!(phi >= 0.0 && phi < 2.0 * kPi)) throw ConfigError("direction phi must lie in [0, 2*pi)");
}

Vec3 direction_to_unit_vector(const Direction& d) {
  const double st = std::sin(d.theta);
  return {st * std::cos(d.phi), st * std::sin(d.phi), std::cos(d.theta)};
}

}  // namespace escat
