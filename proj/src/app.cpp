#include "escat/app.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>

#include "escat/dynamics.hpp"
#include "escat/ensemble.hpp"
#include "escat/errors.hpp"
#include "escat/laser.hpp"
#include "escat/output.hpp"
#include "escat/thomson_cloud.hpp"
#include "escat/wigner.hpp"
#include "json.hpp"

namespace escat {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
}

OutputMeta meta_for(const RunContext& ctx) {
  return {ctx.subcommand, config_hash(ctx.config)};
}

void finish(const RunContext& ctx, const Timer& timer, std::vector<std::string> files) {
  ManifestInfo info;
  info.subcommand = ctx.subcommand;
  info.config = ctx.config;
  info.threads = ctx.threads;
  info.wall_time_s = timer.seconds();
  info.files = std::move(files);
  write_manifest(join(ctx.out_dir, "manifest.json"), info);
}

ElectronState initial_state(const RunConfig& cfg, const FieldEvaluator& field,
                            const UnitSystem& units) {
  ElectronState state;
  state.position = cfg.birth_position;
  state.momentum = cfg.initial_momentum;
  if (cfg.birth_mode == "threshold") {
    if (cfg.beam.model == BeamModel::plane_infinite) {
      throw ConfigError(
          "[electron] birth_mode = threshold needs a pulsed beam model; "
          "use explicit_time with plane_infinite");
    }
    state.time = find_birth_time(field, cfg.birth_position, cfg.birth_threshold_W_cm2);
  } else {
    state.time = units.to_normalized_time(cfg.birth_time_fs * 1e-15);
  }
  return state;
}

Trajectory integrate(const RunConfig& cfg, const FieldEvaluator& field,
                     const UnitSystem& units) {
  const double dt = kTwoPi / cfg.steps_per_period;
  const ElectronState state = initial_state(cfg, field, units);
  if (cfg.n_periods > 0.0) {
    return push_trajectory(field, state, state.time + cfg.n_periods * kTwoPi, dt);
  }
  if (cfg.beam.model == BeamModel::plane_infinite) {
    throw ConfigError("[electron] n_periods must be positive for the plane_infinite model");
  }
  return push_until_quiet(field, state, state.time + kTwoPi, dt);
}

GaussianWavePacket packet_from(const RunConfig& cfg, const UnitSystem& units) {
  GaussianWavePacket packet;
  const double sigma_m = cfg.sigma_nm * 1e-9;
  packet.sigma_r = {sigma_m, sigma_m, sigma_m};
  packet.center_r = {units.to_meters(cfg.birth_position.x), units.to_meters(cfg.birth_position.y),
                     units.to_meters(cfg.birth_position.z)};
  packet.center_p = cfg.center_momentum;
  packet.validate();
  return packet;
}

WignerState state_from(const RunConfig& cfg, const UnitSystem& units) {
  const GaussianWavePacket base = packet_from(cfg, units);
  WignerState state = [&] {
    if (cfg.components.empty()) return WignerState(base);
    MomentumSuperposition sup;
    for (const PacketComponent& c : cfg.components) {
      GaussianWavePacket packet = base;
      packet.center_p = base.center_p + c.dp;
      sup.components.push_back({{c.amplitude_re, c.amplitude_im}, packet});
    }
    return WignerState(sup);
  }();
  if (cfg.evolve_fs != 0.0) state = free_evolve(state, cfg.evolve_fs * 1e-15);
  return state;
}

// The plane-scan axis: the one the superposition components are displaced
// along, x for a symmetric state. Mirrors the negativity scan's choice.
int active_axis(const WignerState& state) {
  const Vec3 sp = state.sigma_p();
  int axis = 0;
  for (int ax = 0; ax < 3; ++ax) {
    double span_r = 0.0, span_p = 0.0;
    for (std::size_t i = 0; i < state.n_components(); ++i) {
      for (std::size_t j = i + 1; j < state.n_components(); ++j) {
        span_r = std::max(span_r, std::abs(component(state.component_r(i), ax) -
                                           component(state.component_r(j), ax)));
        span_p = std::max(span_p, std::abs(component(state.component_p(i), ax) -
                                           component(state.component_p(j), ax)));
      }
    }
    if (span_r > 1e-9 * component(state.sigma_r(), ax) ||
        span_p > 1e-9 * component(sp, ax)) {
      axis = ax;
    }
  }
  return axis;
}

AngularSpectralGrid grid_from(const RunConfig& cfg) {
  return AngularSpectralGrid::make(cfg.n_theta, cfg.n_phi, cfg.n_omega, cfg.omega_min,
                                   cfg.omega_max);
}

void require_seed(const RunConfig& cfg) {
  if (!cfg.seed_set) {
    throw ConfigError(
        "[ensemble] seed is required for Monte Carlo runs; set it in the "
        "config or pass --seed");
  }
}

bool band_in_range(const AngularSpectralGrid& grid, const UnitSystem& units, double lo_nm,
                   double hi_nm) {
  const double w_lo = units.omega_from_wavelength_nm(hi_nm);
  const double w_hi = units.omega_from_wavelength_nm(lo_nm);
  return grid.omegas().front() <= w_lo && w_hi <= grid.omegas().back();
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw ConfigError("short write to " + path);
}

}  // namespace

double band_photon_estimate(const RadiationMap& map, double lambda_min_nm, double lambda_max_nm,
                            double collection_efficiency) {
  EmissionSpectrum spectrum = integrated_spectrum(map);
  const double w_lo = map.units.omega_from_wavelength_nm(lambda_max_nm);
  const double w_hi = map.units.omega_from_wavelength_nm(lambda_min_nm);
  for (std::size_t k = 0; k < spectrum.omegas.size(); ++k) {
    if (spectrum.omegas[k] < w_lo || spectrum.omegas[k] > w_hi) spectrum.values[k] = 0.0;
  }
  return photon_count_estimate(spectrum, collection_efficiency);
}

void run_trajectory(const RunContext& ctx) {
  const Timer timer;
  const RunConfig& cfg = ctx.config;
  const UnitSystem units(cfg.beam.wavelength_nm);
  const FieldEvaluator field(cfg.beam);
  Trajectory traj = integrate(cfg, field, units);
  traj.config_hash = config_hash(cfg);

  ensure_dir(ctx.out_dir);
  write_trajectory_csv(join(ctx.out_dir, "trajectory.csv"), traj, units, meta_for(ctx));
  finish(ctx, timer, {"trajectory.csv"});
}

void run_radiate(const RunContext& ctx) {
  const Timer timer;
  const RunConfig& cfg = ctx.config;
  const UnitSystem units(cfg.beam.wavelength_nm);
  const FieldEvaluator field(cfg.beam);
  Trajectory traj = integrate(cfg, field, units);
  traj.config_hash = config_hash(cfg);

  RadiationOptions ropts;
  ropts.n_threads = ctx.threads;
  const AngularSpectralGrid grid = grid_from(cfg);
  const RadiationMap map = radiation_map(traj, grid, units, ropts);

  ensure_dir(ctx.out_dir);
  write_map_csv(join(ctx.out_dir, "radiation_map.csv"), map, meta_for(ctx));

  nlohmann::json totals;
  totals["total_eV"] = total_energy(map);
  totals["larmor_eV"] = larmor_total(traj, units);
  totals["photons"] = photon_count_estimate(map);
  if (band_in_range(grid, units, 850.0, 950.0)) {
    totals["band_850_950_eV"] = band_energy(map, 850.0, 950.0);
    totals["band_850_950_photons_at_10pct"] = band_photon_estimate(map, 850.0, 950.0, 0.1);
  }
  write_json(join(ctx.out_dir, "totals.json"), totals);
  finish(ctx, timer, {"radiation_map.csv", "totals.json"});
}

void run_thomson_scan(const RunContext& ctx) {
  const Timer timer;
  const RunConfig& cfg = ctx.config;

  std::vector<double> r0_values(cfg.n_r0);
  for (std::size_t i = 0; i < cfg.n_r0; ++i) {
    r0_values[i] =
        cfg.r0_max_over_lambda * static_cast<double>(i) / static_cast<double>(cfg.n_r0 - 1);
  }
  const std::vector<Direction> directions = {
      {M_PI / 2.0, 0.0}, {M_PI / 2.0, M_PI / 2.0}, {0.0, 0.0}};
  // r0 measured in wavelengths, so the drive wavenumber is 2 pi.
  const EfficiencyScan scan = efficiency_scan(r0_values, directions, kTwoPi);

  std::vector<ThomsonScanRow> rows(cfg.n_r0);
  for (std::size_t i = 0; i < cfg.n_r0; ++i) {
    rows[i] = {scan.r0_values[i], scan.ratios[i][0], scan.ratios[i][1], scan.ratios[i][2],
               scan.totals[i]};
  }

  ensure_dir(ctx.out_dir);
  write_thomson_csv(join(ctx.out_dir, "thomson_scan.csv"), rows, meta_for(ctx));
  finish(ctx, timer, {"thomson_scan.csv"});
}

void run_wigner(const RunContext& ctx) {
  const Timer timer;
  const RunConfig& cfg = ctx.config;
  const UnitSystem units(cfg.beam.wavelength_nm);
  const WignerState state = state_from(cfg, units);

  const int axis = active_axis(state);
  const PhaseSpaceBox box = state.support_box(8.0);
  const std::size_t res = cfg.wigner_resolution;

  // Scan plane through the transported center, transverse coordinates pinned.
  const double ct = 299792458.0 * state.time_s();
  Vec3 r_pin = state.component_r(0) + ct * state.component_p(0);
  Vec3 p_pin = state.component_p(0);

  std::vector<double> xs(res), ps(res), w(res * res);
  const double x_lo = component(box.r_min, axis), x_hi = component(box.r_max, axis);
  const double p_lo = component(box.p_min, axis), p_hi = component(box.p_max, axis);
  for (std::size_t i = 0; i < res; ++i) {
    xs[i] = x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(res - 1);
    ps[i] = p_lo + (p_hi - p_lo) * static_cast<double>(i) / static_cast<double>(res - 1);
  }
  for (std::size_t i = 0; i < res; ++i) {
    for (std::size_t j = 0; j < res; ++j) {
      Vec3 r = r_pin;
      Vec3 p = p_pin;
      component(r, axis) = xs[i];
      component(p, axis) = ps[j];
      w[i * res + j] = state(r, p);
    }
  }

  // Width growth of the matching single Gaussian from t = 0 to the evolved
  // time; a single row when no evolution was requested.
  const double sigma0_m = cfg.sigma_nm * 1e-9;
  const std::size_t n_t = cfg.evolve_fs != 0.0 ? 201 : 1;
  std::vector<double> t_fs(n_t), sigma_m(n_t);
  for (std::size_t i = 0; i < n_t; ++i) {
    t_fs[i] = cfg.evolve_fs * static_cast<double>(i) / static_cast<double>(n_t > 1 ? n_t - 1 : 1);
    sigma_m[i] = evolved_sigma(sigma0_m, t_fs[i] * 1e-15);
  }

  const NegativityReport neg = negativity_report(state, box, res);

  ensure_dir(ctx.out_dir);
  const OutputMeta meta = meta_for(ctx);
  write_wigner_plane_csv(join(ctx.out_dir, "wigner_plane.csv"), xs, ps, w, meta);
  write_spreading_csv(join(ctx.out_dir, "spreading.csv"), t_fs, sigma_m, meta);

  nlohmann::json report;
  report["axis"] = axis;
  report["n_components"] = state.n_components();
  report["time_fs"] = cfg.evolve_fs;
  report["sigma0_m"] = sigma0_m;
  report["sigma_evolved_m"] = evolved_sigma(sigma0_m, cfg.evolve_fs * 1e-15);
  report["min_value"] = neg.min_value;
  report["negative_fraction"] = neg.negative_fraction;
  report["mass_in_box"] = neg.mass_in_box;
  write_json(join(ctx.out_dir, "wigner_report.json"), report);
  finish(ctx, timer, {"wigner_plane.csv", "spreading.csv", "wigner_report.json"});
}

void run_ensemble(const RunContext& ctx) {
  const Timer timer;
  const RunConfig& cfg = ctx.config;
  require_seed(cfg);
  const UnitSystem units(cfg.beam.wavelength_nm);
  const FieldEvaluator field(cfg.beam);
  const AngularSpectralGrid grid = grid_from(cfg);

  const std::vector<PhaseSpaceSample> samples =
      cfg.components.empty() && cfg.evolve_fs == 0.0
          ? sample_phase_space(packet_from(cfg, units), cfg.n_samples, cfg.seed)
          : sample_phase_space(state_from(cfg, units), cfg.n_samples, cfg.seed);

  EnsembleOptions opts;
  opts.dt = kTwoPi / cfg.steps_per_period;
  opts.n_threads = ctx.threads;
  const EnsembleResult result = ensemble_radiation(samples, field, grid, cfg.seed, opts);

  ensure_dir(ctx.out_dir);
  const OutputMeta meta = meta_for(ctx);
  const bool want_inc = cfg.model != "coherent";
  const bool want_coh = cfg.model != "incoherent";

  std::vector<std::string> files;
  nlohmann::json report;
  report["n_samples"] = result.n_samples;
  report["seed"] = result.seed;
  report["n_chunks"] = result.n_chunks;
  if (want_inc) {
    write_map_csv(join(ctx.out_dir, "incoherent_map.csv"), result.incoherent_map, meta,
                  &result.incoherent_se);
    files.push_back("incoherent_map.csv");
    report["incoherent_total_eV"] = total_energy(result.incoherent_map);
    if (band_in_range(grid, units, 850.0, 950.0)) {
      const BandStat band = incoherent_band_energy(result, 850.0, 950.0);
      report["incoherent_band_850_950_eV"] = band.value_eV;
      report["incoherent_band_850_950_se_eV"] = band.se_eV;
    }
  }
  if (want_coh) {
    write_map_csv(join(ctx.out_dir, "coherent_map.csv"), result.coherent_map, meta);
    files.push_back("coherent_map.csv");
    report["coherent_total_eV"] = total_energy(result.coherent_map);
  }
  write_json(join(ctx.out_dir, "ensemble_report.json"), report);
  files.push_back("ensemble_report.json");
  finish(ctx, timer, std::move(files));
}

void run_compare(const RunContext& ctx) {
  const Timer timer;
  const RunConfig& cfg = ctx.config;
  require_seed(cfg);
  if (!cfg.components.empty() || cfg.evolve_fs != 0.0) {
    throw ConfigError(
        "[wavepacket] compare works on a single unevolved Gaussian packet; "
        "drop componentN and evolve_fs");
  }
  const UnitSystem units(cfg.beam.wavelength_nm);
  const FieldEvaluator field(cfg.beam);

  EnsembleOptions opts;
  opts.dt = kTwoPi / cfg.steps_per_period;
  opts.n_threads = ctx.threads;
  const CompareReport report =
      compare_models(packet_from(cfg, units), field, cfg.n_samples, cfg.seed, opts);

  ensure_dir(ctx.out_dir);
  write_compare_csv(join(ctx.out_dir, "compare.csv"), report, meta_for(ctx));

  nlohmann::json j;
  j["n_samples"] = report.n_samples;
  j["seed"] = report.seed;
  j["omega_min"] = report.omega_min;
  j["omega_max"] = report.omega_max;
  j["n_omega"] = report.n_omega;
  j["coherent_perp_over_forward"] = report.coherent_perp_over_forward;
  j["coherent_perp_over_forward_se"] = report.coherent_perp_over_forward_se;
  j["incoherent_perp_over_forward"] = report.incoherent_perp_over_forward;
  j["incoherent_perp_over_forward_se"] = report.incoherent_perp_over_forward_se;
  j["eq1_perp_over_forward"] = report.eq1_perp_over_forward;
  write_json(join(ctx.out_dir, "compare_report.json"), j);
  finish(ctx, timer, {"compare.csv", "compare_report.json"});
}

void run_subcommand(const RunContext& ctx) {
  if (ctx.subcommand == "trajectory") return run_trajectory(ctx);
  if (ctx.subcommand == "radiate") return run_radiate(ctx);
  if (ctx.subcommand == "thomson-scan") return run_thomson_scan(ctx);
  if (ctx.subcommand == "wigner") return run_wigner(ctx);
  if (ctx.subcommand == "ensemble") return run_ensemble(ctx);
  if (ctx.subcommand == "compare") return run_compare(ctx);
  throw ConfigError("unknown subcommand " + ctx.subcommand);
}

}  // namespace escat
