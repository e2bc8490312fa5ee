#include "escat/laser.hpp"

#include <cmath>
#include <complex>

#include "escat/errors.hpp"

namespace escat {

namespace {
constexpr double kTwoLn2 = 2.0 * 0.6931471805599453;

bool finite(double v) { return std::isfinite(v); }
}  // namespace

BeamModel beam_model_from_string(const std::string& name) {
  if (name == "plane_infinite") return BeamModel::plane_infinite;
  if (name == "plane_pulsed") return BeamModel::plane_pulsed;
  if (name == "focused_pulsed") return BeamModel::focused_pulsed;
  throw ConfigError("unknown beam model '" + name +
                    "' (expected plane_infinite, plane_pulsed or focused_pulsed)");
}

std::string to_string(BeamModel m) {
  switch (m) {
    case BeamModel::plane_infinite: return "plane_infinite";
    case BeamModel::plane_pulsed: return "plane_pulsed";
    case BeamModel::focused_pulsed: return "focused_pulsed";
  }
  return "?";
}

void BeamConfig::validate() const {
  if (!finite(wavelength_nm) || wavelength_nm <= 0.0)
    throw ConfigError("beam.wavelength_nm must be positive");
  if (!finite(peak_intensity_W_cm2) || peak_intensity_W_cm2 <= 0.0)
    throw ConfigError("beam.peak_intensity_W_cm2 must be positive");
  if (model != BeamModel::plane_infinite) {
    if (!finite(fwhm_fs) || fwhm_fs <= 0.0)
      throw ConfigError("beam.fwhm_fs must be positive for pulsed models");
  }
  if (model == BeamModel::focused_pulsed) {
    if (!finite(waist_over_lambda) || waist_over_lambda < 1.0)
      throw ConfigError("beam.waist_over_lambda must be >= 1 (paraxial beam)");
  }
  if (!finite(carrier_phase)) throw ConfigError("beam.carrier_phase must be finite");
}

FieldEvaluator::FieldEvaluator(const BeamConfig& config)
    : config_(config), units_(config.wavelength_nm) {
  config_.validate();
  a0_ = a0_from_intensity(config_.peak_intensity_W_cm2, config_.wavelength_nm);
  fwhm_norm_ = units_.to_normalized_time(config_.fwhm_fs * 1e-15);
  w0_norm_ = config_.waist_over_lambda * 2.0 * M_PI;
  rayleigh_norm_ = 0.5 * w0_norm_ * w0_norm_;
}

double FieldEvaluator::envelope(double eta) const {
  if (config_.model == BeamModel::plane_infinite) return 1.0;
  const double s = eta / fwhm_norm_;
  return std::exp(-kTwoLn2 * s * s);
}

double FieldEvaluator::envelope_log_slope(double eta) const {
  if (config_.model == BeamModel::plane_infinite) return 0.0;
  return -2.0 * kTwoLn2 * eta / (fwhm_norm_ * fwhm_norm_);
}

FieldSample FieldEvaluator::operator()(const Vec3& pos, double t) const {
  const double eta = t - pos.x;
  const double g = envelope(eta);
  FieldSample f{};
  if (config_.model != BeamModel::focused_pulsed) {
    const double ez = a0_ * g * std::cos(eta + config_.carrier_phase);
    f.e = {0.0, 0.0, ez};
    f.b = {0.0, -ez, 0.0};
    return f;
  }

  // Paraxial Gaussian mode plus the first-order longitudinal components that
  // keep both divergences at second order in 1/(k0 w0).
  using cplx = std::complex<double>;
  const cplx i(0.0, 1.0);
  const double rho2 = pos.y * pos.y + pos.z * pos.z;
  const cplx denom(rayleigh_norm_, -pos.x);  // x_R - i X
  const cplx q = 2.0 * denom;                // w0^2 (1 - i zeta)
  const cplx u = (rayleigh_norm_ / denom) * std::exp(-rho2 / q);
  const cplx carrier = std::exp(i * (eta + config_.carrier_phase));
  const cplx uz = a0_ * g * u * carrier;  // complex E_z

  const cplx slope = 1.0 - i * envelope_log_slope(eta);
  const cplx lon = uz / (denom * slope);
  const cplx ex = i * pos.z * lon;
  const cplx bx = -i * pos.y * lon;

  const double ez = uz.real();
  f.e = {ex.real(), 0.0, ez};
  f.b = {bx.real(), -ez, 0.0};
  return f;
}

double FieldEvaluator::local_intensity_W_cm2(const Vec3& pos, double t) const {
  const double g = envelope(t - pos.x);
  double amp = g;
  if (config_.model == BeamModel::focused_pulsed) {
    const double zeta = pos.x / rayleigh_norm_;
    const double w2 = w0_norm_ * w0_norm_ * (1.0 + zeta * zeta);
    const double rho2 = pos.y * pos.y + pos.z * pos.z;
    amp *= std::sqrt(w0_norm_ * w0_norm_ / w2) * std::exp(-rho2 / w2);
  }
  return config_.peak_intensity_W_cm2 * amp * amp;
}

FieldSample evaluate_field(const BeamConfig& config, const Vec3& pos_norm, double t_norm) {
  return FieldEvaluator(config)(pos_norm, t_norm);
}

double local_intensity(const BeamConfig& config, const Vec3& pos_norm, double t_norm) {
  return FieldEvaluator(config).local_intensity_W_cm2(pos_norm, t_norm);
}

}  // namespace escat
