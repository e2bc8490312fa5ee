#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "escat/laser.hpp"
#include "escat/vec3.hpp"

namespace escat {

// One superposition component of the prepared wave packet: complex amplitude
// and momentum offset (m_e c) from the shared center.
struct PacketComponent {
  double amplitude_re = 1.0;
  double amplitude_im = 0.0;
  Vec3 dp{0.0, 0.0, 0.0};
};

// Fully resolved run configuration. Defaults here are the resolved values a
// minimal config file ends up with; serialize() writes every one of them back
// out so the manifest records the exact inputs of a run.
struct RunConfig {
  // [beam]
  BeamConfig beam;

  // [electron]
  std::string birth_mode = "threshold";  // threshold | explicit_time
  double birth_threshold_W_cm2 = 2e16;
  Vec3 birth_position{0.0, 0.0, 0.0};   // 1/k0
  Vec3 initial_momentum{0.0, 0.0, 0.0};  // m_e c
  double birth_time_fs = 0.0;            // explicit_time mode only
  double steps_per_period = 1000.0;
  double n_periods = 0.0;  // integration span; 0 = run until the pulse passes

  // [grids]
  std::size_t n_theta = 32;
  std::size_t n_phi = 32;
  std::size_t n_omega = 256;
  double omega_min = 0.05;  // units of omega0
  double omega_max = 10.0;
  std::size_t wigner_resolution = 128;
  double r0_max_over_lambda = 2.0;
  std::size_t n_r0 = 81;

  // [wavepacket]
  double sigma_nm = 0.1;  // isotropic packet width
  Vec3 center_momentum{0.0, 0.0, 0.0};
  std::vector<PacketComponent> components;  // empty = single Gaussian
  double evolve_fs = 0.0;

  // [ensemble]
  std::size_t n_samples = 4096;
  std::uint64_t seed = 0;
  bool seed_set = false;  // MC subcommands refuse to run on an implicit seed
  std::string model = "both";  // incoherent | coherent | both

  // [output]
  std::string directory = "out";
};

// Parses INI-style text: [section] headers, key = value lines, # or ;
// comments. Every key is checked against the known set; anything else is a
// ConfigError naming "[section] key".
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Applies one --set override of the form "section.key=value".
void apply_override(RunConfig& config, const std::string& spec);

// Canonical serialization with all defaults resolved: fixed section and key
// order, %.17g numbers. Byte-equal output means an identical run.
std::string serialize_config(const RunConfig& config);

// FNV-1a 64-bit hash of the canonical serialization, as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace escat
