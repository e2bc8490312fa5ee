#pragma once

#include <string>

#include "escat/units.hpp"
#include "escat/vec3.hpp"

namespace escat {

enum class BeamModel { plane_infinite, plane_pulsed, focused_pulsed };

BeamModel beam_model_from_string(const std::string& name);
std::string to_string(BeamModel m);

// Laser geometry is fixed: propagation along +x, linear polarization along z.
struct BeamConfig {
  BeamModel model = BeamModel::plane_pulsed;
  double wavelength_nm = 800.0;
  double peak_intensity_W_cm2 = 1e18;
  double fwhm_fs = 35.0;            // intensity FWHM; ignored for plane_infinite
  double waist_over_lambda = 3.0;   // focused_pulsed only
  double carrier_phase = 0.0;       // carrier phase at the envelope peak

  void validate() const;  // throws ConfigError
};

struct FieldSample {
  Vec3 e;  // electric field, units of a0 (m_e c omega0 / e)
  Vec3 b;  // magnetic field, same normalization
};

// Evaluates fields in normalized coordinates (lengths 1/k0, time 1/omega0).
// Pulsed envelopes ride the retarded phase eta = t - x, peaking at eta = 0.
// The focused model is a paraxial Gaussian plus the first-order longitudinal
// components required by div E = 0 and div B = 0 (expansion parameter
// 1/(k0 w0)), with the envelope-slope factor folded in so the divergence
// stays second order while the pulse switches on and off.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const BeamConfig& config);

  FieldSample operator()(const Vec3& pos, double t) const;

  // Cycle-averaged intensity of the local envelope, W/cm^2.
  double local_intensity_W_cm2(const Vec3& pos, double t) const;

  double a0() const { return a0_; }
  // Field envelope g(eta), normalized to 1 at the peak.
  double field_envelope(double eta) const { return envelope(eta); }
  double fwhm_norm() const { return fwhm_norm_; }  // intensity FWHM in 1/omega0
  double waist_norm() const { return w0_norm_; }
  const BeamConfig& config() const { return config_; }
  const UnitSystem& units() const { return units_; }

 private:
  double envelope(double eta) const;           // field envelope, 1 at eta = 0
  double envelope_log_slope(double eta) const; // g'(eta)/g(eta)

  BeamConfig config_;
  UnitSystem units_;
  double a0_ = 0.0;
  double fwhm_norm_ = 0.0;
  double w0_norm_ = 0.0;
  double rayleigh_norm_ = 0.0;
};

FieldSample evaluate_field(const BeamConfig& config, const Vec3& pos_norm, double t_norm);
double local_intensity(const BeamConfig& config, const Vec3& pos_norm, double t_norm);

}  // namespace escat
