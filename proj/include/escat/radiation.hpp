#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "escat/dynamics.hpp"
#include "escat/grid.hpp"
#include "escat/units.hpp"
#include "escat/vec3.hpp"

namespace escat {

struct Vec3c {
  std::complex<double> x{0.0, 0.0};
  std::complex<double> y{0.0, 0.0};
  std::complex<double> z{0.0, 0.0};

  Vec3c& operator+=(const Vec3c& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

inline Vec3c operator*(double s, const Vec3c& a) { return {s * a.x, s * a.y, s * a.z}; }

inline double norm2(const Vec3c& a) { return std::norm(a.x) + std::norm(a.y) + std::norm(a.z); }

enum class Apodization { none, hann };

struct RadiationOptions {
  Apodization apodization = Apodization::none;
  // Target number of trajectory samples per laser period consumed by the
  // oscillatory integral; the trajectory is subsampled by an integer stride.
  // 0 keeps every sample.
  double samples_per_cycle = 96.0;
  std::size_t n_threads = 1;
};

// Spectral-angular energy density d^2 eps / dOmega domega in eV per steradian
// per unit omega/omega0, on a product grid.
struct RadiationMap {
  AngularSpectralGrid grid;
  std::vector<double> values;  // [(i_theta * n_phi + i_phi) * n_omega + k]
  UnitSystem units;
  double observation_radius_um = 100.0;

  double value(std::size_t i_theta, std::size_t i_phi, std::size_t k) const {
    return values[(i_theta * grid.n_phi() + i_phi) * grid.n_omega() + k];
  }
};

// A single spectrum: either one direction of a map or its solid-angle
// integral. Values are eV per unit omega/omega0 (per steradian too when
// per-direction).
struct EmissionSpectrum {
  std::vector<double> omegas;
  std::vector<double> values;
  UnitSystem units;
  bool integrated_over_solid_angle = false;
  std::string config_hash;
  std::uint64_t seed = 0;
};

// Far-field amplitude A(n,omega) = integral of n x (n x beta) e^{i omega tau}
// dt with tau = t - n.r, endpoint-corrected trapezoid on the uniform
// trajectory grid plus analytic ballistic-tail terms. Requires quiet
// endpoints (|dbeta/dt| < 1e-8) unless a window is applied.
Vec3c farfield_amplitude(const Trajectory& traj, const Direction& direction, double omega,
                         Apodization apodization = Apodization::none);

RadiationMap radiation_map(const Trajectory& traj, const AngularSpectralGrid& grid,
                           const UnitSystem& units, const RadiationOptions& opts = {});

// Complex far-field amplitudes A for every (direction, omega) node, laid out
// like RadiationMap::values. Same endpoint handling and subsampling as
// radiation_map; single threaded, since callers batch over trajectories.
std::vector<Vec3c> amplitude_map(const Trajectory& traj, const AngularSpectralGrid& grid,
                                 const RadiationOptions& opts = {});

// Solid-angle and frequency integral over the whole map, eV.
double total_energy(const RadiationMap& map);

// Integral restricted to vacuum wavelengths [lambda_min_nm, lambda_max_nm],
// with partial-bin weighting at the band edges. The band must lie inside the
// grid's spectral range.
double band_energy(const RadiationMap& map, double lambda_min_nm, double lambda_max_nm);

// Time-domain total via the relativistic Larmor formula, eV. Independent of
// the spectral route; used as an oracle for total_energy.
double larmor_total(const Trajectory& traj, const UnitSystem& units);

// Expected photon number: integral of the energy density divided by the local
// photon energy, times a collection efficiency.
double photon_count_estimate(const RadiationMap& map, double collection_efficiency = 1.0);
double photon_count_estimate(const EmissionSpectrum& spectrum,
                             double collection_efficiency = 1.0);

// Row extraction and solid-angle reduction.
EmissionSpectrum spectrum_at(const RadiationMap& map, std::size_t i_theta, std::size_t i_phi);
EmissionSpectrum integrated_spectrum(const RadiationMap& map);

}  // namespace escat
