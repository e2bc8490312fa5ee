#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "escat/laser.hpp"
#include "escat/vec3.hpp"

namespace escat {

struct ElectronState {
  Vec3 position{0.0, 0.0, 0.0};  // 1/k0 units
  Vec3 momentum{0.0, 0.0, 0.0};  // m_e c units
  double time = 0.0;             // 1/omega0 units

  double gamma() const;
  Vec3 beta() const;
};

// Uniformly sampled trajectory: sample i sits at t0 + i*dt. Velocity and
// acceleration are stored alongside the state because the radiation integral
// consumes them directly.
class Trajectory {
 public:
  static Trajectory from_samples(double t0, double dt, std::vector<Vec3> positions,
                                 std::vector<Vec3> momenta, std::vector<Vec3> betas,
                                 std::vector<Vec3> accelerations);

  std::size_t size() const { return positions_.size(); }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  double time(std::size_t i) const { return t0_ + static_cast<double>(i) * dt_; }
  double t_end() const { return time(size() - 1); }
  double birth_time() const { return t0_; }

  const std::vector<Vec3>& positions() const { return positions_; }
  const std::vector<Vec3>& momenta() const { return momenta_; }
  const std::vector<Vec3>& betas() const { return betas_; }
  const std::vector<Vec3>& accelerations() const { return accelerations_; }

  ElectronState state(std::size_t i) const;

  // Run provenance, filled in by the application layer when available.
  std::string config_hash;

 private:
  double t0_ = 0.0;
  double dt_ = 0.0;
  std::vector<Vec3> positions_;
  std::vector<Vec3> momenta_;
  std::vector<Vec3> betas_;
  std::vector<Vec3> accelerations_;
};

// Earliest time on the rising edge at which the local cycle-averaged
// intensity at birth_position crosses the threshold; bisection to 1e-6 of a
// laser period. Throws ConfigError when the threshold is never crossed or the
// beam has no envelope.
double find_birth_time(const BeamConfig& config, const Vec3& birth_position,
                       double threshold_W_cm2);
double find_birth_time(const FieldEvaluator& field, const Vec3& birth_position,
                       double threshold_W_cm2);

// Fixed-step RK4 for dp/dt = -(E + beta x B), dr/dt = beta. Acceleration at
// each sample is recomputed from the force law. Requires dt <= period/200
// (2*pi/200 normalized) and initial.time < t_end.
Trajectory push_trajectory(const BeamConfig& config, const ElectronState& initial, double t_end,
                           double dt);
Trajectory push_trajectory(const FieldEvaluator& field, const ElectronState& initial,
                           double t_end, double dt);

// Extends the integration past t_end in whole-period chunks until the
// acceleration magnitude drops below accel_threshold (the pulse has passed),
// up to max_extra_periods more. Pulsed models only.
Trajectory push_until_quiet(const FieldEvaluator& field, const ElectronState& initial,
                            double t_end, double dt, double accel_threshold = 1e-10,
                            std::size_t max_extra_periods = 2000);

// Cycle-averaged momentum over the final full period of carrier phase
// eta = t - x seen by the electron (weight d eta = (1 - beta_x) dt). For a
// free or drifting electron this is the constant drift momentum.
Vec3 drift_momentum(const Trajectory& traj);

}  // namespace escat
