#pragma once

#include <cstddef>
#include <string>

#include "escat/config.hpp"
#include "escat/radiation.hpp"

namespace escat {

struct RunContext {
  RunConfig config;
  std::string out_dir;     // created if missing
  std::size_t threads = 1;
  std::string subcommand;  // trajectory | radiate | thomson-scan | wigner | ensemble | compare
};

// Photon count in a vacuum-wavelength band: the solid-angle integrated
// spectrum divided by the local photon energy, nodes outside the band masked,
// times the collection efficiency.
double band_photon_estimate(const RadiationMap& map, double lambda_min_nm, double lambda_max_nm,
                            double collection_efficiency);

// Each runner writes its CSV/JSON products plus manifest.json into out_dir.
// Configuration problems surface as ConfigError, numerical ones as
// NumericError; nothing is written until the inputs validate.
void run_trajectory(const RunContext& ctx);
void run_radiate(const RunContext& ctx);
void run_thomson_scan(const RunContext& ctx);
void run_wigner(const RunContext& ctx);
void run_ensemble(const RunContext& ctx);
void run_compare(const RunContext& ctx);

// Dispatches on ctx.subcommand.
void run_subcommand(const RunContext& ctx);

}  // namespace escat
