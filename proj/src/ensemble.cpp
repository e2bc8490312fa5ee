#include "escat/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "escat/constants.hpp"
#include "escat/errors.hpp"
#include "escat/rng.hpp"
#include "escat/thomson_cloud.hpp"

namespace escat {

namespace {

// Relative slack when deciding whether superposition components share a
// phase-space center.
constexpr double kDegenerateTol = 1e-9;

double axis(const Vec3& v, int i) { return component(v, i); }

}  // namespace

std::vector<PhaseSpaceSample> sample_phase_space(const GaussianWavePacket& packet, std::size_t n,
                                                 std::uint64_t seed) {
  packet.validate();
  if (n == 0) throw ConfigError("phase-space sampling needs at least one sample");

  const Vec3 sr = packet.sigma_r;
  const Vec3 sp{constants::compton_reduced_m / (2.0 * sr.x),
                constants::compton_reduced_m / (2.0 * sr.y),
                constants::compton_reduced_m / (2.0 * sr.z)};

  std::mt19937_64 rng(seed);
  std::vector<PhaseSpaceSample> out(n);
  for (std::size_t s = 0; s < n; ++s) {
    // Fixed draw order, three pairs per sample, so streams never depend on
    // how the caller partitions the work.
    const auto [g1, g2] = normal_pair(rng);
    const auto [g3, g4] = normal_pair(rng);
    const auto [g5, g6] = normal_pair(rng);
    out[s].position_m = {packet.center_r.x + sr.x * g1, packet.center_r.y + sr.y * g2,
                         packet.center_r.z + sr.z * g3};
    out[s].momentum = {packet.center_p.x + sp.x * g4, packet.center_p.y + sp.y * g5,
                       packet.center_p.z + sp.z * g6};
    out[s].weight = 1.0;
  }
  return out;
}

std::vector<PhaseSpaceSample> sample_phase_space(const WignerState& state, std::size_t n,
                                                 std::uint64_t seed) {
  const Vec3 sr = state.sigma_r();
  const Vec3 sp = state.sigma_p();
  for (std::size_t j = 1; j < state.n_components(); ++j) {
    for (int ax = 0; ax < 3; ++ax) {
      const double dr = std::abs(axis(state.component_r(j), ax) - axis(state.component_r(0), ax));
      const double dp = std::abs(axis(state.component_p(j), ax) - axis(state.component_p(0), ax));
      if (dr > kDegenerateTol * axis(sr, ax) || dp > kDegenerateTol * axis(sp, ax)) {
        throw ConfigError(
            "cannot sample a displaced superposition: the Wigner function is negative in some "
            "phase-space region and is not a probability density");
      }
    }
  }

  GaussianWavePacket base;
  base.center_r = state.component_r(0);
  base.center_p = state.component_p(0);
  base.sigma_r = sr;
  std::vector<PhaseSpaceSample> out = sample_phase_space(base, n, seed);

  // Free evolution shears phase space; applying the same map to the draws
  // reproduces the evolved density exactly.
  const double ct_m = constants::c_m_per_s * state.time_s();
  if (ct_m != 0.0) {
    for (PhaseSpaceSample& s : out) s.position_m += ct_m * s.momentum;
  }
  return out;
}

EnsembleResult ensemble_radiation(const std::vector<PhaseSpaceSample>& samples,
                                  const FieldEvaluator& field, const AngularSpectralGrid& grid,
                                  std::uint64_t seed, const EnsembleOptions& opts) {
  if (samples.empty()) throw ConfigError("ensemble needs at least one sample");
  if (field.config().model == BeamModel::plane_infinite) {
    throw ConfigError("ensemble emission needs a pulsed beam model; plane_infinite never ends");
  }
  if (!(opts.dt > 0.0)) throw ConfigError("ensemble dt must be positive");

  const UnitSystem& units = field.units();

  // Common birth time for the whole ensemble: the phase-space density is a
  // snapshot at one instant, so every sample starts together, early enough
  // that the earliest of them still sits in dead field.
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -std::numeric_limits<double>::infinity();
  for (const PhaseSpaceSample& s : samples) {
    if (!(s.weight >= 0.0) || !std::isfinite(s.weight)) {
      throw ConfigError("sample weights must be finite and nonnegative");
    }
    const double x = units.to_normalized_length(s.position_m.x);
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
  }
  const double pad = 4.0 * field.fwhm_norm();
  const double t0 = x_lo - pad;
  const double t_end = x_hi + pad;

  RadiationOptions ropts;
  ropts.samples_per_cycle = opts.samples_per_cycle;

  const std::size_t n = samples.size();
  const std::size_t n_nodes = grid.n_nodes();
  const std::size_t n_chunks = std::min(std::max<std::size_t>(opts.n_chunks, 1), n);

  std::vector<double> chunk_w(n_chunks, 0.0);
  std::vector<std::vector<double>> chunk_abs2(n_chunks, std::vector<double>(n_nodes, 0.0));
  std::vector<std::vector<Vec3c>> chunk_amp(n_chunks, std::vector<Vec3c>(n_nodes));

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;

  auto worker = [&] {
    try {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        const std::size_t lo = c * n / n_chunks;
        const std::size_t hi = (c + 1) * n / n_chunks;
        for (std::size_t s = lo; s < hi; ++s) {
          const PhaseSpaceSample& ps = samples[s];
          try {
            const Vec3 pos{units.to_normalized_length(ps.position_m.x),
                           units.to_normalized_length(ps.position_m.y),
                           units.to_normalized_length(ps.position_m.z)};
            const ElectronState init{pos, ps.momentum, t0};
            const Trajectory traj = push_until_quiet(field, init, t_end, opts.dt);
            const std::vector<Vec3c> amps = amplitude_map(traj, grid, ropts);
            chunk_w[c] += ps.weight;
            std::vector<double>& a2 = chunk_abs2[c];
            std::vector<Vec3c>& am = chunk_amp[c];
            for (std::size_t i = 0; i < n_nodes; ++i) {
              a2[i] += ps.weight * norm2(amps[i]);
              am[i] += ps.weight * amps[i];
            }
          } catch (const ConfigError& e) {
            throw ConfigError("sample " + std::to_string(s) + ": " + e.what());
          } catch (const NumericError& e) {
            throw NumericError("sample " + std::to_string(s) + ": " + e.what());
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!err) err = std::current_exception();
      next.store(n_chunks);  // wind down the other workers
    }
  };

  const std::size_t n_threads = std::max<std::size_t>(1, std::min(opts.n_threads, n_chunks));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);

  // Reduce in fixed chunk order; together with the fixed chunk boundaries
  // this makes the result bitwise independent of the thread count.
  double w_tot = 0.0;
  std::vector<double> abs2_tot(n_nodes, 0.0);
  std::vector<Vec3c> amp_tot(n_nodes);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    w_tot += chunk_w[c];
    for (std::size_t i = 0; i < n_nodes; ++i) {
      abs2_tot[i] += chunk_abs2[c][i];
      amp_tot[i] += chunk_amp[c][i];
    }
  }
  if (!(w_tot > 0.0)) throw ConfigError("ensemble weights sum to zero");

  const double pref =
      constants::fine_structure_alpha / (4.0 * M_PI * M_PI) * units.hbar_omega0_eV();
  const std::size_t nw = grid.n_omega();
  std::vector<double> factor(nw);
  for (std::size_t k = 0; k < nw; ++k) {
    factor[k] = pref * grid.omegas()[k] * grid.omegas()[k];
  }

  std::vector<double> inc(n_nodes), coh(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double f = factor[i % nw];
    inc[i] = f * (abs2_tot[i] / w_tot);
    coh[i] = f * norm2((1.0 / w_tot) * amp_tot[i]);
  }

  std::vector<double> se(n_nodes, 0.0);
  if (n_chunks >= 2) {
    bool ok = true;
    for (std::size_t c = 0; c < n_chunks; ++c) ok = ok && (w_tot - chunk_w[c] > 0.0);
    if (ok) {
      std::vector<double> del(n_chunks);
      for (std::size_t i = 0; i < n_nodes; ++i) {
        const double f = factor[i % nw];
        double mean = 0.0;
        for (std::size_t c = 0; c < n_chunks; ++c) {
          del[c] = f * ((abs2_tot[i] - chunk_abs2[c][i]) / (w_tot - chunk_w[c]));
          mean += del[c];
        }
        mean /= static_cast<double>(n_chunks);
        double ss = 0.0;
        for (std::size_t c = 0; c < n_chunks; ++c) ss += (del[c] - mean) * (del[c] - mean);
        se[i] = std::sqrt(ss * static_cast<double>(n_chunks - 1) / static_cast<double>(n_chunks));
      }
    }
  }

  EnsembleResult result{RadiationMap{grid, std::move(inc), units, 100.0},
                        RadiationMap{grid, std::move(coh), units, 100.0},
                        std::move(se),
                        n,
                        seed,
                        n_chunks,
                        std::move(chunk_w),
                        std::move(chunk_abs2),
                        std::move(chunk_amp)};
  return result;
}

namespace {

// Spectral factor (alpha / 4 pi^2) hbar omega0 * omega^2 per frequency node.
std::vector<double> node_factors(const EnsembleResult& r) {
  const AngularSpectralGrid& grid = r.incoherent_map.grid;
  const double pref = constants::fine_structure_alpha / (4.0 * M_PI * M_PI) *
                      r.incoherent_map.units.hbar_omega0_eV();
  std::vector<double> f(grid.n_omega());
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = pref * grid.omegas()[k] * grid.omegas()[k];
  }
  return f;
}

struct Totals {
  double w = 0.0;
  std::vector<double> abs2;
  std::vector<Vec3c> amp;
};

Totals reduce_totals(const EnsembleResult& r) {
  const std::size_t n_nodes = r.incoherent_map.values.size();
  Totals t;
  t.abs2.assign(n_nodes, 0.0);
  t.amp.assign(n_nodes, Vec3c{});
  for (std::size_t c = 0; c < r.n_chunks; ++c) {
    t.w += r.chunk_weight[c];
    for (std::size_t i = 0; i < n_nodes; ++i) {
      t.abs2[i] += r.chunk_abs2[c][i];
      t.amp[i] += r.chunk_amp[c][i];
    }
  }
  return t;
}

BandStat jackknife(double estimate, const std::vector<double>& deleted, bool bias_corrected) {
  const std::size_t c_count = deleted.size();
  if (c_count < 2) return {estimate, 0.0};
  double mean = 0.0;
  for (double d : deleted) mean += d;
  mean /= static_cast<double>(c_count);
  double ss = 0.0;
  for (double d : deleted) ss += (d - mean) * (d - mean);
  const double se =
      std::sqrt(ss * static_cast<double>(c_count - 1) / static_cast<double>(c_count));
  const double value = bias_corrected
                           ? static_cast<double>(c_count) * estimate -
                                 static_cast<double>(c_count - 1) * mean
                           : estimate;
  return {value, se};
}

void require_chunks(const EnsembleResult& r) {
  if (r.n_chunks == 0 || r.chunk_weight.size() != r.n_chunks ||
      r.chunk_abs2.size() != r.n_chunks || r.chunk_amp.size() != r.n_chunks) {
    throw ConfigError("ensemble result is missing its chunk sums");
  }
}

// Energy per steradian toward direction node d from the given amplitude-square
// sums, integrated over the frequency ladder.
double direction_energy(const AngularSpectralGrid& grid, const std::vector<double>& factors,
                        const std::vector<double>& abs2, double w, std::size_t d) {
  const std::size_t nw = grid.n_omega();
  double e = 0.0;
  for (std::size_t k = 0; k < nw; ++k) {
    e += factors[k] * (abs2[d * nw + k] / w) * grid.omega_weight(k);
  }
  return e;
}

double direction_energy_coherent(const AngularSpectralGrid& grid,
                                 const std::vector<double>& factors,
                                 const std::vector<Vec3c>& amp, double w, std::size_t d) {
  const std::size_t nw = grid.n_omega();
  double e = 0.0;
  for (std::size_t k = 0; k < nw; ++k) {
    e += factors[k] * norm2((1.0 / w) * amp[d * nw + k]) * grid.omega_weight(k);
  }
  return e;
}

}  // namespace

BandStat incoherent_band_energy(const EnsembleResult& result, double lambda_min_nm,
                                double lambda_max_nm) {
  require_chunks(result);
  const AngularSpectralGrid& grid = result.incoherent_map.grid;
  if (!grid.has_angular_quadrature()) {
    throw ConfigError("band energy needs a grid with an angular quadrature rule");
  }
  const double estimate = band_energy(result.incoherent_map, lambda_min_nm, lambda_max_nm);
  if (result.n_chunks < 2) return {estimate, 0.0};

  const Totals tot = reduce_totals(result);
  const std::vector<double> factors = node_factors(result);
  const std::size_t n_nodes = result.incoherent_map.values.size();
  const std::size_t nw = grid.n_omega();
  std::vector<double> deleted(result.n_chunks);
  std::vector<double> vals(n_nodes);
  for (std::size_t c = 0; c < result.n_chunks; ++c) {
    const double w = tot.w - result.chunk_weight[c];
    if (!(w > 0.0)) return {estimate, 0.0};
    for (std::size_t i = 0; i < n_nodes; ++i) {
      vals[i] = factors[i % nw] * ((tot.abs2[i] - result.chunk_abs2[c][i]) / w);
    }
    const RadiationMap del{grid, vals, result.incoherent_map.units,
                           result.incoherent_map.observation_radius_um};
    deleted[c] = band_energy(del, lambda_min_nm, lambda_max_nm);
  }
  return jackknife(estimate, deleted, false);
}

BandStat incoherent_direction_energy(const EnsembleResult& result, std::size_t i_theta,
                                     std::size_t i_phi) {
  require_chunks(result);
  const AngularSpectralGrid& grid = result.incoherent_map.grid;
  const std::size_t d = i_theta * grid.n_phi() + i_phi;
  if (i_theta >= grid.n_theta() || i_phi >= grid.n_phi()) {
    throw ConfigError("direction index out of range");
  }
  const Totals tot = reduce_totals(result);
  const std::vector<double> factors = node_factors(result);
  const double estimate = direction_energy(grid, factors, tot.abs2, tot.w, d);
  if (result.n_chunks < 2) return {estimate, 0.0};

  std::vector<double> deleted(result.n_chunks);
  for (std::size_t c = 0; c < result.n_chunks; ++c) {
    const double w = tot.w - result.chunk_weight[c];
    if (!(w > 0.0)) return {estimate, 0.0};
    double e = 0.0;
    for (std::size_t k = 0; k < grid.n_omega(); ++k) {
      const std::size_t i = d * grid.n_omega() + k;
      e += factors[k] * ((tot.abs2[i] - result.chunk_abs2[c][i]) / w) * grid.omega_weight(k);
    }
    deleted[c] = e;
  }
  return jackknife(estimate, deleted, false);
}

BandStat coherent_direction_energy(const EnsembleResult& result, std::size_t i_theta,
                                   std::size_t i_phi) {
  require_chunks(result);
  const AngularSpectralGrid& grid = result.coherent_map.grid;
  if (i_theta >= grid.n_theta() || i_phi >= grid.n_phi()) {
    throw ConfigError("direction index out of range");
  }
  const std::size_t d = i_theta * grid.n_phi() + i_phi;
  const Totals tot = reduce_totals(result);
  const std::vector<double> factors = node_factors(result);
  const double estimate = direction_energy_coherent(grid, factors, tot.amp, tot.w, d);
  if (result.n_chunks < 2) return {estimate, 0.0};

  std::vector<double> deleted(result.n_chunks);
  for (std::size_t c = 0; c < result.n_chunks; ++c) {
    const double w = tot.w - result.chunk_weight[c];
    if (!(w > 0.0)) return {estimate, 0.0};
    double e = 0.0;
    for (std::size_t k = 0; k < grid.n_omega(); ++k) {
      const std::size_t i = d * grid.n_omega() + k;
      Vec3c a = tot.amp[i];
      a += -1.0 * result.chunk_amp[c][i];
      e += factors[k] * norm2((1.0 / w) * a) * grid.omega_weight(k);
    }
    deleted[c] = e;
  }
  return jackknife(estimate, deleted, true);
}

void MomentumDensity::validate() const {
  if (momenta.empty() || momenta.size() != weights.size()) {
    throw ConfigError("momentum density needs one weight per momentum");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < momenta.size(); ++j) {
    const Vec3& p = momenta[j];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw ConfigError("momentum density holds a non-finite momentum");
    }
    if (!(weights[j] >= 0.0) || !std::isfinite(weights[j])) {
      throw ConfigError("momentum density weights must be finite and nonnegative");
    }
    sum += weights[j];
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw ConfigError("momentum density weights must sum to 1 (within 1e-6)");
  }
}

EmissionSpectrum plane_wave_reduction(const MomentumDensity& density, const FieldEvaluator& field,
                                      const AngularSpectralGrid& grid,
                                      const EnsembleOptions& opts) {
  density.validate();
  if (field.config().model != BeamModel::plane_pulsed) {
    throw ConfigError("the plane-wave reduction applies to the plane_pulsed model only");
  }
  if (grid.n_directions() > 1 && !grid.has_angular_quadrature()) {
    throw ConfigError(
        "plane-wave reduction needs either a single direction or an angular quadrature grid");
  }
  if (!(opts.dt > 0.0)) throw ConfigError("plane-wave reduction dt must be positive");

  const UnitSystem& units = field.units();
  const double pad = 4.0 * field.fwhm_norm();

  RadiationOptions ropts;
  ropts.samples_per_cycle = opts.samples_per_cycle;
  ropts.n_threads = opts.n_threads;

  // In a plane wave the transverse position only fixes an overall phase and
  // the longitudinal one a time shift, neither of which moves |A|^2, so all
  // emitters can start from the origin.
  std::vector<double> acc(grid.n_nodes(), 0.0);
  for (std::size_t j = 0; j < density.momenta.size(); ++j) {
    if (density.weights[j] == 0.0) continue;
    const ElectronState init{{0.0, 0.0, 0.0}, density.momenta[j], -pad};
    const Trajectory traj = push_until_quiet(field, init, pad, opts.dt);
    const RadiationMap map = radiation_map(traj, grid, units, ropts);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += density.weights[j] * map.values[i];
  }

  const RadiationMap mixed{grid, std::move(acc), units, 100.0};
  if (grid.has_angular_quadrature()) return integrated_spectrum(mixed);
  return spectrum_at(mixed, 0, 0);
}

CompareReport compare_models(const GaussianWavePacket& packet, const FieldEvaluator& field,
                             std::size_t n_samples, std::uint64_t seed,
                             const EnsembleOptions& opts) {
  packet.validate();
  const Vec3 sr = packet.sigma_r;
  if (std::abs(sr.y - sr.x) > 1e-12 * sr.x || std::abs(sr.z - sr.x) > 1e-12 * sr.x) {
    throw ConfigError("compare_models needs an isotropic wave packet (equal sigma_r per axis)");
  }
  if (n_samples == 0) throw ConfigError("compare_models needs at least one sample");
  if (field.config().model == BeamModel::plane_infinite) {
    throw ConfigError("compare_models needs a pulsed beam model");
  }

  // Frequency window matched to the pulse bandwidth: the scattered line has
  // the envelope's Fourier width sigma_omega = 2 sqrt(ln 2) / fwhm.
  const double sigma_omega = 2.0 * std::sqrt(std::log(2.0)) / field.fwhm_norm();
  const double omega_lo = 1.0 - 4.0 * sigma_omega;
  const double omega_hi = 1.0 + 4.0 * sigma_omega;
  if (!(omega_lo > 0.0)) {
    throw ConfigError("pulse is too short: the comparison window would reach omega <= 0");
  }
  const std::size_t n_omega = 129;
  const AngularSpectralGrid grid = AngularSpectralGrid::from_directions(
      {M_PI / 2.0, 0.0}, {0.0, M_PI / 2.0, M_PI}, n_omega, omega_lo, omega_hi);

  const std::vector<PhaseSpaceSample> draws = sample_phase_space(packet, n_samples, seed);
  const EnsembleResult res = ensemble_radiation(draws, field, grid, seed, opts);

  // Point reference: one deterministic electron at the packet center.
  EnsembleOptions point_opts = opts;
  point_opts.n_chunks = 1;
  const std::vector<PhaseSpaceSample> center{{packet.center_r, packet.center_p, 1.0}};
  const EnsembleResult point = ensemble_radiation(center, field, grid, seed, point_opts);

  // Analytic coherent angular factor for a Gaussian cloud. The form factor of
  // a density with standard deviation sigma matches the cloud expression with
  // radius sqrt(2) sigma.
  const double sigma_norm = field.units().to_normalized_length(sr.x);
  const GaussianCloud cloud{std::sqrt(2.0) * sigma_norm, 1.0};
  const Direction forward_dir(M_PI / 2.0, 0.0);
  const double eq1_forward = cloud_intensity(cloud, forward_dir);

  struct RowIndex {
    std::size_t i_theta, i_phi;
  };
  const RowIndex rows_ix[4] = {{0, 0}, {0, 1}, {1, 0}, {0, 2}};  // fwd, perp, pole, back

  CompareReport report;
  report.rows.reserve(4);
  for (const RowIndex& ix : rows_ix) {
    const Direction dir = grid.direction(ix.i_theta, ix.i_phi);
    const BandStat inc = incoherent_direction_energy(res, ix.i_theta, ix.i_phi);
    const BandStat coh = coherent_direction_energy(res, ix.i_theta, ix.i_phi);
    const BandStat pt = incoherent_direction_energy(point, ix.i_theta, ix.i_phi);
    const double eq1 = cloud_intensity(cloud, dir) / eq1_forward;
    report.rows.push_back(CompareRow{dir, inc.value_eV, inc.se_eV, coh.value_eV, coh.se_eV,
                                     pt.value_eV, eq1});
  }

  // Perp-over-forward ratios with jackknife errors. The coherent ratio also
  // gets the jackknife bias correction: its numerator is |mean A|^2, whose
  // O(1/n) sampling bias would otherwise swamp a strongly suppressed signal.
  const Totals tot = reduce_totals(res);
  const std::vector<double> factors = node_factors(res);
  const std::size_t d_fwd = 0, d_perp = 1;

  const double inc_fwd = direction_energy(grid, factors, tot.abs2, tot.w, d_fwd);
  const double inc_perp = direction_energy(grid, factors, tot.abs2, tot.w, d_perp);
  const double coh_fwd = direction_energy_coherent(grid, factors, tot.amp, tot.w, d_fwd);
  const double coh_perp = direction_energy_coherent(grid, factors, tot.amp, tot.w, d_perp);

  std::vector<double> inc_ratio_del(res.n_chunks), coh_ratio_del(res.n_chunks);
  bool have_del = res.n_chunks >= 2;
  if (have_del) {
    const std::size_t nw = grid.n_omega();
    for (std::size_t c = 0; c < res.n_chunks; ++c) {
      const double w = tot.w - res.chunk_weight[c];
      if (!(w > 0.0)) {
        have_del = false;
        break;
      }
      double ifwd = 0.0, iperp = 0.0, cfwd = 0.0, cperp = 0.0;
      for (std::size_t k = 0; k < nw; ++k) {
        const double fk = factors[k] * grid.omega_weight(k);
        const std::size_t nf = d_fwd * nw + k;
        const std::size_t np = d_perp * nw + k;
        ifwd += fk * ((tot.abs2[nf] - res.chunk_abs2[c][nf]) / w);
        iperp += fk * ((tot.abs2[np] - res.chunk_abs2[c][np]) / w);
        Vec3c af = tot.amp[nf];
        af += -1.0 * res.chunk_amp[c][nf];
        Vec3c ap = tot.amp[np];
        ap += -1.0 * res.chunk_amp[c][np];
        cfwd += fk * norm2((1.0 / w) * af);
        cperp += fk * norm2((1.0 / w) * ap);
      }
      inc_ratio_del[c] = iperp / ifwd;
      coh_ratio_del[c] = cperp / cfwd;
    }
  }
  const BandStat inc_ratio =
      jackknife(inc_perp / inc_fwd, have_del ? inc_ratio_del : std::vector<double>{}, false);
  const BandStat coh_ratio =
      jackknife(coh_perp / coh_fwd, have_del ? coh_ratio_del : std::vector<double>{}, true);

  report.coherent_perp_over_forward = coh_ratio.value_eV;
  report.coherent_perp_over_forward_se = coh_ratio.se_eV;
  report.incoherent_perp_over_forward = inc_ratio.value_eV;
  report.incoherent_perp_over_forward_se = inc_ratio.se_eV;
  report.eq1_perp_over_forward =
      cloud_intensity(cloud, Direction(M_PI / 2.0, M_PI / 2.0)) / eq1_forward;
  report.n_samples = n_samples;
  report.seed = seed;
  report.omega_min = omega_lo;
  report.omega_max = omega_hi;
  report.n_omega = n_omega;
  return report;
}

}  // namespace escat
