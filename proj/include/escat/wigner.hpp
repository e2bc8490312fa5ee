#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "escat/vec3.hpp"

namespace escat {

// Phase space mixes SI positions (m) with momenta in m_e c, so hbar enters
// every formula as the reduced Compton wavelength hbar/(m_e c) in meters.

struct GaussianWavePacket {
  Vec3 center_r;                      // m
  Vec3 center_p;                      // m_e c
  Vec3 sigma_r{1e-10, 1e-10, 1e-10};  // m, per axis; sigma_p = hbar/(2 sigma_r)

  void validate() const;  // throws ConfigError
};

struct WeightedPacket {
  std::complex<double> amplitude{1.0, 0.0};
  GaussianWavePacket packet;
};

// Superposition of Gaussians sharing sigma_r, typically displaced in
// momentum. Amplitudes are renormalized by the evaluator, overlap terms
// included, so only their relative values matter.
struct MomentumSuperposition {
  std::vector<WeightedPacket> components;

  void validate() const;  // throws ConfigError
};

struct PhaseSpaceBox {
  Vec3 r_min;  // m
  Vec3 r_max;
  Vec3 p_min;  // m_e c
  Vec3 p_max;
};

struct NegativityReport {
  double min_value = 0.0;          // most negative density on the scan plane
  double negative_fraction = 0.0;  // fraction of scan cells below zero
  double mass_in_box = 0.0;        // probability the box actually covers
};

// Closed-form Wigner density of a Gaussian packet or a finite superposition,
// with free ballistic transport folded in. Values are phase-space densities
// in 1/(m^3 (m_e c)^3); a minimum-uncertainty Gaussian peaks at (pi hbar)^-3
// in these mixed units.
class WignerState {
 public:
  explicit WignerState(const GaussianWavePacket& packet);
  explicit WignerState(const MomentumSuperposition& superposition);

  double operator()(const Vec3& r, const Vec3& p) const;

  std::size_t n_components() const { return centers_r_.size(); }
  std::complex<double> amplitude(std::size_t j) const { return amps_[j]; }
  const Vec3& component_r(std::size_t j) const { return centers_r_[j]; }
  const Vec3& component_p(std::size_t j) const { return centers_p_[j]; }
  const Vec3& sigma_r() const { return sigma_; }
  Vec3 sigma_p() const;
  double time_s() const;
  // Per-axis width of each component after the elapsed free flight.
  Vec3 evolved_sigma_r() const;

  // Smallest box holding every component center plus n widths on each side,
  // transport of the position centers included.
  PhaseSpaceBox support_box(double n_widths = 8.0) const;

 private:
  WignerState() = default;
  void normalize();

  friend WignerState free_evolve(const WignerState& state, double t_s);
  friend double marginal_position(const WignerState& state, const Vec3& r);
  friend double marginal_momentum(const WignerState& state, const Vec3& p);
  friend double mass_in_box(const WignerState& state, const PhaseSpaceBox& box);
  friend NegativityReport negativity_report(const WignerState& state, const PhaseSpaceBox& box,
                                            std::size_t resolution);

  std::vector<std::complex<double>> amps_;
  std::vector<Vec3> centers_r_;
  std::vector<Vec3> centers_p_;
  Vec3 sigma_;
  double ct_m_ = 0.0;  // c * elapsed free-flight time, m
};

double wigner_eval(const WignerState& state, const Vec3& r, const Vec3& p);

// Ballistic transport rho(r, p; t) = rho(r - (p/m) t, p; 0), nonrelativistic.
WignerState free_evolve(const WignerState& state, double t_s);

// sigma(t) = sigma0 sqrt(1 + (hbar t / (2 m sigma0^2))^2)
double evolved_sigma(double sigma0_m, double t_s);

// Probability densities obtained by quadrature of the Wigner density over the
// conjugate variable: |psi(r)|^2 in 1/m^3 and |alpha(p)|^2 in 1/(m_e c)^3.
double marginal_position(const WignerState& state, const Vec3& r);
double marginal_momentum(const WignerState& state, const Vec3& p);

// Phase-space probability inside the box, cross terms included.
double mass_in_box(const WignerState& state, const PhaseSpaceBox& box);

// Grid scan of the (x, p) plane along the superposition axis, transverse
// coordinates pinned at the shared centers. Components must be displaced
// along a single coordinate axis, and the box must hold >= 99% of the state.
NegativityReport negativity_report(const WignerState& state, const PhaseSpaceBox& box,
                                   std::size_t resolution);

}  // namespace escat
