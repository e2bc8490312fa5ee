#include "escat/dynamics.hpp"

#include <cmath>
#include <utility>

#include "escat/errors.hpp"

namespace escat {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kMaxSamples = 2e7;

struct Deriv {
  Vec3 dr;
  Vec3 dp;
};

Deriv derivative(const FieldEvaluator& field, const Vec3& r, const Vec3& p, double t) {
  const double gamma = std::sqrt(1.0 + norm2(p));
  const Vec3 beta = (1.0 / gamma) * p;
  const FieldSample f = field(r, t);
  return {beta, -(f.e + cross(beta, f.b))};
}

Vec3 acceleration_from_force(const Vec3& p, const Vec3& pdot) {
  const double gamma = std::sqrt(1.0 + norm2(p));
  const Vec3 beta = (1.0 / gamma) * p;
  return (1.0 / gamma) * (pdot - dot(beta, pdot) * beta);
}

void check_finite(const Vec3& r, const Vec3& p, double t) {
  const bool ok = std::isfinite(r.x) && std::isfinite(r.y) && std::isfinite(r.z) &&
                  std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
  if (!ok) {
    throw NumericError("non-finite electron state at t = " + std::to_string(t));
  }
}

void rk4_step(const FieldEvaluator& field, Vec3& r, Vec3& p, double t, double dt) {
  const Deriv k1 = derivative(field, r, p, t);
  const Deriv k2 = derivative(field, r + 0.5 * dt * k1.dr, p + 0.5 * dt * k1.dp, t + 0.5 * dt);
  const Deriv k3 = derivative(field, r + 0.5 * dt * k2.dr, p + 0.5 * dt * k2.dp, t + 0.5 * dt);
  const Deriv k4 = derivative(field, r + dt * k3.dr, p + dt * k3.dp, t + dt);
  r += (dt / 6.0) * (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr);
  p += (dt / 6.0) * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp);
}

class Recorder {
 public:
  Recorder(const FieldEvaluator& field, const ElectronState& initial, double dt)
      : field_(field), dt_(dt), r_(initial.position), p_(initial.momentum), t0_(initial.time) {
    record();
  }

  void advance(std::size_t n_steps) {
    for (std::size_t i = 0; i < n_steps; ++i) {
      const double t = t0_ + static_cast<double>(steps_) * dt_;
      rk4_step(field_, r_, p_, t, dt_);
      ++steps_;
      check_finite(r_, p_, t + dt_);
      record();
    }
  }

  double last_accel_norm() const { return norm(acc_.back()); }

  Trajectory finish() {
    return Trajectory::from_samples(t0_, dt_, std::move(pos_), std::move(mom_), std::move(beta_),
                                    std::move(acc_));
  }

 private:
  void record() {
    const double t = t0_ + static_cast<double>(steps_) * dt_;
    const Deriv d = derivative(field_, r_, p_, t);
    pos_.push_back(r_);
    mom_.push_back(p_);
    const double gamma = std::sqrt(1.0 + norm2(p_));
    beta_.push_back((1.0 / gamma) * p_);
    acc_.push_back(acceleration_from_force(p_, d.dp));
  }

  const FieldEvaluator& field_;
  double dt_;
  Vec3 r_, p_;
  double t0_;
  std::size_t steps_ = 0;
  std::vector<Vec3> pos_, mom_, beta_, acc_;
};

std::size_t step_count(double t0, double t_end, double dt) {
  if (!(t_end > t0)) throw ConfigError("push_trajectory requires initial.time < t_end");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive and finite");
  if (dt > kTwoPi / 200.0 * (1.0 + 1e-12)) {
    throw ConfigError("dt exceeds laser period / 200");
  }
  const double n = std::ceil((t_end - t0) / dt - 1e-9);
  if (n > kMaxSamples) throw ConfigError("trajectory would exceed the sample limit");
  return static_cast<std::size_t>(n);
}

}  // namespace

double ElectronState::gamma() const { return std::sqrt(1.0 + norm2(momentum)); }

Vec3 ElectronState::beta() const { return (1.0 / gamma()) * momentum; }

Trajectory Trajectory::from_samples(double t0, double dt, std::vector<Vec3> positions,
                                    std::vector<Vec3> momenta, std::vector<Vec3> betas,
                                    std::vector<Vec3> accelerations) {
  const std::size_t n = positions.size();
  if (n < 2 || momenta.size() != n || betas.size() != n || accelerations.size() != n) {
    throw ConfigError("trajectory sample arrays must share a length of at least 2");
  }
  if (!(dt > 0.0)) throw ConfigError("trajectory dt must be positive");
  Trajectory tr;
  tr.t0_ = t0;
  tr.dt_ = dt;
  tr.positions_ = std::move(positions);
  tr.momenta_ = std::move(momenta);
  tr.betas_ = std::move(betas);
  tr.accelerations_ = std::move(accelerations);
  for (const Vec3& b : tr.betas_) {
    if (!(norm2(b) < 1.0)) throw NumericError("trajectory contains |beta| >= 1");
  }
  return tr;
}

ElectronState Trajectory::state(std::size_t i) const {
  return {positions_[i], momenta_[i], time(i)};
}

double find_birth_time(const BeamConfig& config, const Vec3& birth_position,
                       double threshold_W_cm2) {
  return find_birth_time(FieldEvaluator(config), birth_position, threshold_W_cm2);
}

double find_birth_time(const FieldEvaluator& field, const Vec3& birth_position,
                       double threshold_W_cm2) {
  if (field.config().model == BeamModel::plane_infinite) {
    throw ConfigError("birth threshold is undefined for plane_infinite (no envelope)");
  }
  if (!(threshold_W_cm2 > 0.0) || !std::isfinite(threshold_W_cm2)) {
    throw ConfigError("birth threshold must be positive and finite");
  }
  // The local envelope peaks when the retarded phase vanishes, t = x.
  const double t_peak = birth_position.x;
  const double local_peak = field.local_intensity_W_cm2(birth_position, t_peak);
  if (threshold_W_cm2 >= local_peak) {
    throw ConfigError("birth threshold is never crossed on the rising edge");
  }

  double hi = t_peak;
  double lo = t_peak - field.fwhm_norm();
  while (field.local_intensity_W_cm2(birth_position, lo) >= threshold_W_cm2) {
    lo = t_peak - 2.0 * (t_peak - lo);
  }
  const double tol = 1e-6 * kTwoPi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (field.local_intensity_W_cm2(birth_position, mid) < threshold_W_cm2) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Trajectory push_trajectory(const BeamConfig& config, const ElectronState& initial, double t_end,
                           double dt) {
  return push_trajectory(FieldEvaluator(config), initial, t_end, dt);
}

Trajectory push_trajectory(const FieldEvaluator& field, const ElectronState& initial,
                           double t_end, double dt) {
  Recorder rec(field, initial, dt);
  rec.advance(step_count(initial.time, t_end, dt));
  return rec.finish();
}

Trajectory push_until_quiet(const FieldEvaluator& field, const ElectronState& initial,
                            double t_end, double dt, double accel_threshold,
                            std::size_t max_extra_periods) {
  if (field.config().model == BeamModel::plane_infinite) {
    throw ConfigError("push_until_quiet requires a pulsed beam model");
  }
  Recorder rec(field, initial, dt);
  rec.advance(step_count(initial.time, t_end, dt));
  const std::size_t steps_per_period = static_cast<std::size_t>(std::ceil(kTwoPi / dt));
  std::size_t extra = 0;
  while (rec.last_accel_norm() > accel_threshold) {
    if (++extra > max_extra_periods) {
      throw NumericError("acceleration did not fall below the quiet threshold");
    }
    rec.advance(steps_per_period);
  }
  return rec.finish();
}

Vec3 drift_momentum(const Trajectory& traj) {
  const std::size_t n = traj.size();
  if (traj.t_end() - traj.t0() < 2.0 * kTwoPi * (1.0 - 1e-12)) {
    throw NumericError("drift_momentum requires at least two laser periods");
  }
  // Average over the final full period of the carrier phase eta = t - x seen
  // by the electron; the weight is d eta = (1 - beta_x) dt.
  std::vector<double> eta(n);
  for (std::size_t i = 0; i < n; ++i) eta[i] = traj.time(i) - traj.positions()[i].x;
  const double eta_end = eta[n - 1];
  const double eta_start = eta_end - kTwoPi;
  if (eta[0] > eta_start) {
    throw NumericError("trajectory spans less than one full carrier period at the electron");
  }

  std::size_t a = n - 1;
  while (a > 0 && eta[a - 1] >= eta_start) --a;
  // eta[a-1] < eta_start <= eta[a]; integrate p d eta by trapezoid with a
  // linearly interpolated partial first segment.
  Vec3 integral{0.0, 0.0, 0.0};
  if (a > 0 && eta[a] > eta_start) {
    const double slope = (eta_start - eta[a]) / (eta[a] - eta[a - 1]);
    const Vec3 p_start =
        traj.momenta()[a] + slope * (traj.momenta()[a] - traj.momenta()[a - 1]);
    integral += 0.5 * (eta[a] - eta_start) * (p_start + traj.momenta()[a]);
  }
  for (std::size_t i = a; i + 1 < n; ++i) {
    integral += 0.5 * (eta[i + 1] - eta[i]) * (traj.momenta()[i] + traj.momenta()[i + 1]);
  }
  return (1.0 / kTwoPi) * integral;
}

}  // namespace escat
