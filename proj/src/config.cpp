#include "escat/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "escat/errors.hpp"

namespace escat {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void bad_value(const std::string& path, const std::string& value,
                            const char* expected) {
  throw ConfigError("invalid value for " + path + ": \"" + value + "\" (" + expected + ")");
}

double parse_double(const std::string& path, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x)) {
    bad_value(path, value, "expected a finite number");
  }
  return x;
}

std::size_t parse_count(const std::string& path, const std::string& value) {
  const double x = parse_double(path, value);
  if (x < 0.0 || x != std::floor(x) || x > 1e15) {
    bad_value(path, value, "expected a nonnegative integer");
  }
  return static_cast<std::size_t>(x);
}

std::uint64_t parse_seed(const std::string& path, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || v[0] == '-' || end != v.c_str() + v.size()) {
    bad_value(path, value, "expected a nonnegative integer");
  }
  return static_cast<std::uint64_t>(x);
}

Vec3 parse_vec3(const std::string& path, const std::string& value) {
  std::istringstream in(value);
  double x, y, z;
  std::string extra;
  if (!(in >> x >> y >> z) || (in >> extra)) {
    bad_value(path, value, "expected three numbers");
  }
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
    bad_value(path, value, "expected finite numbers");
  }
  return {x, y, z};
}

// Parse-time state that is not part of the resolved config.
struct ParseState {
  bool sigma_nm_seen = false;
  bool sigma_angstrom_seen = false;
  std::vector<bool> component_seen;
};

void set_key(RunConfig& c, ParseState& st, const std::string& section, const std::string& key,
             const std::string& value) {
  const std::string path = "[" + section + "] " + key;

  if (section == "beam") {
    if (key == "model") {
      c.beam.model = beam_model_from_string(trim(value));
    } else if (key == "wavelength_nm") {
      c.beam.wavelength_nm = parse_double(path, value);
    } else if (key == "peak_intensity_W_cm2") {
      c.beam.peak_intensity_W_cm2 = parse_double(path, value);
    } else if (key == "fwhm_fs") {
      c.beam.fwhm_fs = parse_double(path, value);
    } else if (key == "waist_over_lambda") {
      c.beam.waist_over_lambda = parse_double(path, value);
    } else if (key == "carrier_phase") {
      c.beam.carrier_phase = parse_double(path, value);
    } else {
      throw ConfigError("unknown key " + path);
    }
    return;
  }

  if (section == "electron") {
    if (key == "birth_mode") {
      const std::string v = trim(value);
      if (v != "threshold" && v != "explicit_time") {
        bad_value(path, value, "expected threshold or explicit_time");
      }
      c.birth_mode = v;
    } else if (key == "birth_threshold_W_cm2") {
      c.birth_threshold_W_cm2 = parse_double(path, value);
    } else if (key == "birth_position") {
      c.birth_position = parse_vec3(path, value);
    } else if (key == "initial_momentum") {
      c.initial_momentum = parse_vec3(path, value);
    } else if (key == "birth_time_fs") {
      c.birth_time_fs = parse_double(path, value);
    } else if (key == "steps_per_period") {
      c.steps_per_period = parse_double(path, value);
    } else if (key == "n_periods") {
      c.n_periods = parse_double(path, value);
    } else {
      throw ConfigError("unknown key " + path);
    }
    return;
  }

  if (section == "grids") {
    if (key == "n_theta") {
      c.n_theta = parse_count(path, value);
    } else if (key == "n_phi") {
      c.n_phi = parse_count(path, value);
    } else if (key == "n_omega") {
      c.n_omega = parse_count(path, value);
    } else if (key == "omega_min") {
      c.omega_min = parse_double(path, value);
    } else if (key == "omega_max") {
      c.omega_max = parse_double(path, value);
    } else if (key == "wigner_resolution") {
      c.wigner_resolution = parse_count(path, value);
    } else if (key == "r0_max_over_lambda") {
      c.r0_max_over_lambda = parse_double(path, value);
    } else if (key == "n_r0") {
      c.n_r0 = parse_count(path, value);
    } else {
      throw ConfigError("unknown key " + path);
    }
    return;
  }

  if (section == "wavepacket") {
    if (key == "sigma_nm") {
      if (st.sigma_angstrom_seen) {
        throw ConfigError(path + " conflicts with [wavepacket] sigma_angstrom");
      }
      st.sigma_nm_seen = true;
      c.sigma_nm = parse_double(path, value);
    } else if (key == "sigma_angstrom") {
      if (st.sigma_nm_seen) {
        throw ConfigError(path + " conflicts with [wavepacket] sigma_nm");
      }
      st.sigma_angstrom_seen = true;
      c.sigma_nm = 0.1 * parse_double(path, value);
    } else if (key == "center_momentum") {
      c.center_momentum = parse_vec3(path, value);
    } else if (key == "evolve_fs") {
      c.evolve_fs = parse_double(path, value);
    } else if (key.rfind("component", 0) == 0) {
      const std::string index = key.substr(9);
      char* end = nullptr;
      const unsigned long n = std::strtoul(index.c_str(), &end, 10);
      if (index.empty() || end != index.c_str() + index.size() || n == 0 || n > 64) {
        throw ConfigError("unknown key " + path);
      }
      std::istringstream in(value);
      PacketComponent comp;
      std::string extra;
      if (!(in >> comp.amplitude_re >> comp.amplitude_im >> comp.dp.x >> comp.dp.y >>
            comp.dp.z) ||
          (in >> extra)) {
        bad_value(path, value, "expected five numbers: re im dpx dpy dpz");
      }
      if (c.components.size() < n) {
        c.components.resize(n);
        st.component_seen.resize(n, false);
      }
      c.components[n - 1] = comp;
      st.component_seen[n - 1] = true;
    } else {
      throw ConfigError("unknown key " + path);
    }
    return;
  }

  if (section == "ensemble") {
    if (key == "n_samples") {
      c.n_samples = parse_count(path, value);
    } else if (key == "seed") {
      c.seed = parse_seed(path, value);
      c.seed_set = true;
    } else if (key == "model") {
      const std::string v = trim(value);
      if (v != "incoherent" && v != "coherent" && v != "both") {
        bad_value(path, value, "expected incoherent, coherent, or both");
      }
      c.model = v;
    } else {
      throw ConfigError("unknown key " + path);
    }
    return;
  }

  if (section == "output") {
    if (key == "directory") {
      const std::string v = trim(value);
      if (v.empty()) bad_value(path, value, "expected a directory name");
      c.directory = v;
    } else {
      throw ConfigError("unknown key " + path);
    }
    return;
  }

  throw ConfigError("unknown section [" + section + "]");
}

void check_resolved(const RunConfig& c, const ParseState& st) {
  for (std::size_t i = 0; i < st.component_seen.size(); ++i) {
    if (!st.component_seen[i]) {
      throw ConfigError("[wavepacket] component" + std::to_string(i + 1) +
                        " is missing (components must be numbered 1..N without gaps)");
    }
  }
  if (!(c.beam.wavelength_nm > 0.0)) {
    throw ConfigError("[beam] wavelength_nm must be positive");
  }
  if (!(c.beam.peak_intensity_W_cm2 > 0.0)) {
    throw ConfigError("[beam] peak_intensity_W_cm2 must be positive");
  }
  if (c.beam.model != BeamModel::plane_infinite && !(c.beam.fwhm_fs > 0.0)) {
    throw ConfigError("[beam] fwhm_fs must be positive for pulsed models");
  }
  if (c.beam.model == BeamModel::focused_pulsed && !(c.beam.waist_over_lambda >= 1.0)) {
    throw ConfigError("[beam] waist_over_lambda must be at least 1");
  }
  c.beam.validate();

  if (!(c.birth_threshold_W_cm2 > 0.0)) {
    throw ConfigError("[electron] birth_threshold_W_cm2 must be positive");
  }
  if (!(c.steps_per_period >= 200.0)) {
    throw ConfigError("[electron] steps_per_period must be at least 200");
  }
  if (!(c.n_periods >= 0.0)) {
    throw ConfigError("[electron] n_periods must be nonnegative");
  }

  if (c.n_theta < 2 || c.n_phi < 2) {
    throw ConfigError("[grids] n_theta and n_phi must both be at least 2");
  }
  if (c.n_omega < 2) throw ConfigError("[grids] n_omega must be at least 2");
  if (!(c.omega_min > 0.0) || !(c.omega_max > c.omega_min)) {
    throw ConfigError("[grids] omega_min must be positive and below omega_max");
  }
  if (c.wigner_resolution < 2) {
    throw ConfigError("[grids] wigner_resolution must be at least 2");
  }
  if (!(c.r0_max_over_lambda > 0.0)) {
    throw ConfigError("[grids] r0_max_over_lambda must be positive");
  }
  if (c.n_r0 < 2) throw ConfigError("[grids] n_r0 must be at least 2");

  if (!(c.sigma_nm > 0.0)) throw ConfigError("[wavepacket] sigma_nm must be positive");
  if (c.n_samples < 1) throw ConfigError("[ensemble] n_samples must be at least 1");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  ParseState state;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "beam" && section != "electron" && section != "grids" &&
          section != "wavepacket" && section != "ensemble" && section != "output") {
        throw ConfigError("unknown section [" + section + "]");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any [section]");
    }
    set_key(config, state, section, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  check_resolved(config, state);
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_override(RunConfig& config, const std::string& spec) {
  const std::size_t dot = spec.find('.');
  const std::size_t eq = spec.find('=');
  if (dot == std::string::npos || eq == std::string::npos || dot > eq || dot == 0) {
    throw ConfigError("malformed --set override \"" + spec + "\" (want section.key=value)");
  }
  ParseState state;
  // An override may legitimately re-set sigma either way; conflict tracking
  // only applies within one source. Components already resolved in the base
  // config count as present.
  state.component_seen.assign(config.components.size(), true);
  set_key(config, state, spec.substr(0, dot), trim(spec.substr(dot + 1, eq - dot - 1)),
          spec.substr(eq + 1));
  check_resolved(config, state);
}

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string vec(const Vec3& v) { return num(v.x) + " " + num(v.y) + " " + num(v.z); }

}  // namespace

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[beam]\n";
  out << "model = " << to_string(c.beam.model) << "\n";
  out << "wavelength_nm = " << num(c.beam.wavelength_nm) << "\n";
  out << "peak_intensity_W_cm2 = " << num(c.beam.peak_intensity_W_cm2) << "\n";
  out << "fwhm_fs = " << num(c.beam.fwhm_fs) << "\n";
  out << "waist_over_lambda = " << num(c.beam.waist_over_lambda) << "\n";
  out << "carrier_phase = " << num(c.beam.carrier_phase) << "\n";
  out << "\n[electron]\n";
  out << "birth_mode = " << c.birth_mode << "\n";
  out << "birth_threshold_W_cm2 = " << num(c.birth_threshold_W_cm2) << "\n";
  out << "birth_position = " << vec(c.birth_position) << "\n";
  out << "initial_momentum = " << vec(c.initial_momentum) << "\n";
  out << "birth_time_fs = " << num(c.birth_time_fs) << "\n";
  out << "steps_per_period = " << num(c.steps_per_period) << "\n";
  out << "n_periods = " << num(c.n_periods) << "\n";
  out << "\n[grids]\n";
  out << "n_theta = " << c.n_theta << "\n";
  out << "n_phi = " << c.n_phi << "\n";
  out << "n_omega = " << c.n_omega << "\n";
  out << "omega_min = " << num(c.omega_min) << "\n";
  out << "omega_max = " << num(c.omega_max) << "\n";
  out << "wigner_resolution = " << c.wigner_resolution << "\n";
  out << "r0_max_over_lambda = " << num(c.r0_max_over_lambda) << "\n";
  out << "n_r0 = " << c.n_r0 << "\n";
  out << "\n[wavepacket]\n";
  out << "sigma_nm = " << num(c.sigma_nm) << "\n";
  out << "center_momentum = " << vec(c.center_momentum) << "\n";
  for (std::size_t i = 0; i < c.components.size(); ++i) {
    const PacketComponent& p = c.components[i];
    out << "component" << (i + 1) << " = " << num(p.amplitude_re) << " " << num(p.amplitude_im)
        << " " << vec(p.dp) << "\n";
  }
  out << "evolve_fs = " << num(c.evolve_fs) << "\n";
  out << "\n[ensemble]\n";
  out << "n_samples = " << c.n_samples << "\n";
  out << "seed = " << c.seed << "\n";
  out << "model = " << c.model << "\n";
  out << "\n[output]\n";
  out << "directory = " << c.directory << "\n";
  return out.str();
}

std::string config_hash(const RunConfig& config) {
  const std::string text = serialize_config(config);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace escat
