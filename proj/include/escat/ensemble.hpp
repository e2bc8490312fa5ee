#pragma once

#include <cstdint>
#include <vector>

#include "escat/dynamics.hpp"
#include "escat/grid.hpp"
#include "escat/laser.hpp"
#include "escat/radiation.hpp"
#include "escat/wigner.hpp"

namespace escat {

// One draw from the phase-space density. Positions are lab meters (the
// sampling widths are set by the wave packet, not the laser), momenta m_e c.
struct PhaseSpaceSample {
  Vec3 position_m{0.0, 0.0, 0.0};
  Vec3 momentum{0.0, 0.0, 0.0};
  double weight = 1.0;
};

// Independent Gaussian draws per axis with the packet's sigma_r and the
// conjugate sigma_p = hbar/(2 sigma_r). The stream depends only on the seed:
// same seed, same samples, regardless of thread count.
std::vector<PhaseSpaceSample> sample_phase_space(const GaussianWavePacket& packet, std::size_t n,
                                                 std::uint64_t seed);

// Monte Carlo sampling needs a nonnegative density, so this overload accepts
// only states whose Wigner function is a plain Gaussian (a single component,
// or a superposition collapsed onto one center). Evolved states are handled
// exactly by shearing the draws along the free-streaming map.
std::vector<PhaseSpaceSample> sample_phase_space(const WignerState& state, std::size_t n,
                                                 std::uint64_t seed);

struct EnsembleOptions {
  double dt = 2.0 * M_PI / 1000.0;  // pusher step, units of 1/omega0
  double samples_per_cycle = 96.0;  // passed through to the radiation integral
  std::size_t n_threads = 1;
  std::size_t n_chunks = 64;  // statistics blocks; capped at the sample count
};

// Per-node first and second moments of the far-field amplitude over the
// ensemble. The incoherent map is the weighted mean of |A|^2 (independent
// emitters), the coherent map is |weighted mean of A|^2 (one extended
// charge). Chunk sums are kept so derived statistics can jackknife.
struct EnsembleResult {
  RadiationMap incoherent_map;
  RadiationMap coherent_map;
  std::vector<double> incoherent_se;  // per node, jackknife over chunks

  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::size_t n_chunks = 0;                     // effective block count
  std::vector<double> chunk_weight;             // [chunk]
  std::vector<std::vector<double>> chunk_abs2;  // [chunk][node], sum w |A|^2
  std::vector<std::vector<Vec3c>> chunk_amp;    // [chunk][node], sum w A
};

// Pushes every sample through the pulse from a common birth time (all samples
// in dead field) and accumulates the two averages above. Deterministic for a
// fixed sample list: chunk boundaries are fixed and the reduction runs in
// chunk order, so results are bitwise independent of n_threads.
EnsembleResult ensemble_radiation(const std::vector<PhaseSpaceSample>& samples,
                                  const FieldEvaluator& field, const AngularSpectralGrid& grid,
                                  std::uint64_t seed, const EnsembleOptions& opts = {});

struct BandStat {
  double value_eV = 0.0;
  double se_eV = 0.0;
};

// Solid-angle-integrated incoherent energy in [lambda_min_nm, lambda_max_nm].
BandStat incoherent_band_energy(const EnsembleResult& result, double lambda_min_nm,
                                double lambda_max_nm);

// Spectrum-integrated energy per steradian toward one grid direction.
BandStat incoherent_direction_energy(const EnsembleResult& result, std::size_t i_theta,
                                     std::size_t i_phi);

// Same for the coherent average. |mean A|^2 carries an O(1/n) sampling bias
// (the mean-square error of the amplitude estimate leaks in), which matters
// once the coherent signal is smaller than the incoherent one by ~n; the
// jackknife estimate C theta_hat - (C-1) mean(theta_del) removes it exactly
// for this quadratic statistic.
BandStat coherent_direction_energy(const EnsembleResult& result, std::size_t i_theta,
                                   std::size_t i_phi);

// Discrete momentum distribution for the plane-wave reduction: in a plane
// wave nothing depends on the transverse offset, so a spatially spread packet
// reduces to a weighted sum of single-momentum emitters.
struct MomentumDensity {
  std::vector<Vec3> momenta;    // m_e c
  std::vector<double> weights;  // nonnegative, sum to 1

  void validate() const;  // throws ConfigError
};

// Weighted incoherent spectrum over the momentum distribution, every emitter
// starting from the origin. Returns the solid-angle integral when the grid
// carries an angular quadrature rule, the single direction's spectrum when
// the grid holds exactly one direction, and refuses anything else.
EmissionSpectrum plane_wave_reduction(const MomentumDensity& density, const FieldEvaluator& field,
                                      const AngularSpectralGrid& grid,
                                      const EnsembleOptions& opts = {});

// One observation direction of the model comparison.
struct CompareRow {
  Direction direction;
  double incoherent_eV_sr = 0.0;
  double incoherent_se = 0.0;
  double coherent_eV_sr = 0.0;  // jackknife bias-corrected
  double coherent_se = 0.0;
  double point_eV_sr = 0.0;   // same pipeline, one electron at the center
  double eq1_ratio = 0.0;     // analytic coherent prediction, forward = 1
};

// Head-to-head comparison of the incoherent ensemble, the coherent average,
// the point-electron reference, and the analytic coherent-cloud angular
// factor, on a fixed direction set (forward, perpendicular, pole, backward)
// with the spectral window matched to the pulse bandwidth.
struct CompareReport {
  std::vector<CompareRow> rows;  // forward, perpendicular, pole, backward

  double coherent_perp_over_forward = 0.0;  // jackknife bias-corrected
  double coherent_perp_over_forward_se = 0.0;
  double incoherent_perp_over_forward = 0.0;
  double incoherent_perp_over_forward_se = 0.0;
  double eq1_perp_over_forward = 0.0;

  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double omega_min = 0.0;  // units of omega0
  double omega_max = 0.0;
  std::size_t n_omega = 0;
};

CompareReport compare_models(const GaussianWavePacket& packet, const FieldEvaluator& field,
                             std::size_t n_samples, std::uint64_t seed,
                             const EnsembleOptions& opts = {});

}  // namespace escat
