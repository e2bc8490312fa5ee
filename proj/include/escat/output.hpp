#pragma once

#include <string>
#include <vector>

#include "escat/config.hpp"
#include "escat/dynamics.hpp"
#include "escat/ensemble.hpp"
#include "escat/radiation.hpp"

namespace escat {

// Provenance stamped as leading # comment lines into every CSV.
struct OutputMeta {
  std::string subcommand;
  std::string config_hash;
};

// All writers emit one header row naming each column with its unit, then one
// data row per record, numbers at full double precision. They throw
// ConfigError when the file cannot be created.

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const UnitSystem& units, const OutputMeta& meta);

// Angular-spectral map, columns theta_rad, phi_rad, omega_over_omega0,
// d2e_dOmega_domega_eV. An optional per-node standard error (laid out like
// RadiationMap::values) adds an se_eV column.
void write_map_csv(const std::string& path, const RadiationMap& map, const OutputMeta& meta,
                   const std::vector<double>* standard_error = nullptr);

void write_spectrum_csv(const std::string& path, const std::vector<double>& omegas,
                        const std::vector<double>& de_domega_eV, const OutputMeta& meta);

struct ThomsonScanRow {
  double r0_over_lambda = 0.0;
  double ratio_forward = 0.0;
  double ratio_perpendicular_y = 0.0;
  double ratio_z_pole = 0.0;
  double ratio_total = 0.0;
};

void write_thomson_csv(const std::string& path, const std::vector<ThomsonScanRow>& rows,
                       const OutputMeta& meta);

void write_compare_csv(const std::string& path, const CompareReport& report,
                       const OutputMeta& meta);

// Phase-space plane w(x, p) on the polarization axis; w is row-major over
// (position index, momentum index).
void write_wigner_plane_csv(const std::string& path, const std::vector<double>& x_m,
                            const std::vector<double>& p_mec, const std::vector<double>& w,
                            const OutputMeta& meta);

void write_spreading_csv(const std::string& path, const std::vector<double>& t_fs,
                         const std::vector<double>& sigma_m, const OutputMeta& meta);

// manifest.json: subcommand, version, config hash, the full resolved config
// text, seed, thread count, wall time, and the list of files written.
struct ManifestInfo {
  std::string subcommand;
  RunConfig config;
  std::size_t threads = 1;
  double wall_time_s = 0.0;
  std::vector<std::string> files;
};

void write_manifest(const std::string& path, const ManifestInfo& info);

// Serialized JSON body of the manifest, exposed for tests.
std::string manifest_json(const ManifestInfo& info);

}  // namespace escat
